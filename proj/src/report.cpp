#include "wsnids/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "wsnids/error.hpp"

namespace wsnids {

namespace {

using nlohmann::ordered_json;

std::vector<NodeId> parse_id_list(const std::string& s) {
  std::vector<NodeId> out;
  if (s == "-" || s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, '|')) {
    out.push_back(NodeId{static_cast<std::uint32_t>(std::stoul(item))});
  }
  return out;
}

struct ClassTrack {
  std::string cls = "Fresh";
  std::optional<Tick> banned_until;
};

}  // namespace

RunReport build_report(const EventLog& log) {
  RunReport r;
  struct Window {
    Tick start;
    Tick stop;
  };
  std::map<NodeId, std::vector<Window>> attacked;
  std::map<NodeId, ClassTrack> classes;
  std::map<NodeId, std::size_t> pending;  // attacker -> index of undetected attack

  for (const auto& rec : log.records()) {
    const std::string& k = rec.kind;
    if (k == "RunInfo") {
      r.seed = rec.u64("seed");
      r.window = rec.u64("window");
      r.length = rec.u64("length");
    } else if (k == "AttackStart") {
      attacked[rec.subject].push_back({rec.u64("start"), rec.u64("stop")});
      AttackOutcome a;
      a.attacker = rec.subject;
      a.kind = rec.str("attack");
      a.injected_at = rec.tick;
      pending[rec.subject] = r.attacks.size();
      r.attacks.push_back(std::move(a));
    } else if (k == "Alert") {
      auto it = pending.find(rec.subject);
      if (it == pending.end()) continue;
      AttackOutcome& a = r.attacks[it->second];
      if (rec.tick < a.injected_at) continue;
      a.first_alert_at = rec.tick;
      a.detection_latency = rec.tick - a.injected_at;
      a.detector = rec.str("role");
      a.alert_kind = rec.str("alert");
      pending.erase(it);
    } else if (k == "Observation") {
      const Tick end = rec.tick;
      const Tick begin = end >= r.window ? end - r.window : 0;
      bool under_attack = false;
      for (const auto& w : attacked[rec.subject]) {
        under_attack = under_attack || (w.start < end && begin < w.stop);
      }
      if (under_attack) continue;
      ++r.clean_windows;
      if (rec.str("finding") != "none") ++r.false_positive_windows;
    } else if (k == "ClassChange" || k == "ClassRestore") {
      auto& c = classes[rec.subject];
      c.cls = k == "ClassChange" ? rec.str("to") : rec.str("class");
      auto until = rec.str("banned_until");
      c.banned_until = until == "-" ? std::nullopt : std::optional<Tick>(std::stoull(until));
      if (k == "ClassChange" && c.cls == "Suspect") ++r.suspect_entries;
    } else if (k == "RedAlert") {
      ++r.red_alerts;
    } else if (k == "Forward") {
      auto it = classes.find(rec.subject);
      if (it == classes.end()) continue;
      const auto& c = it->second;
      if (c.cls == "Malicious" ||
          (c.cls == "Suspect" && c.banned_until && rec.tick < *c.banned_until)) {
        ++r.isolation_violations;
      }
    } else if (k == "Ops") {
      r.ops.push_back({rec.subject, rec.str("role"), rec.u64("total")});
    } else if (k == "Takeover") {
      r.takeovers.push_back({rec.tick, rec.subject,
                             NodeId{static_cast<std::uint32_t>(rec.u64("successor"))},
                             parse_id_list(rec.str("transferred"))});
    }
  }
  r.false_positive_rate = r.clean_windows == 0
                              ? 0.0
                              : static_cast<double>(r.false_positive_windows) /
                                    static_cast<double>(r.clean_windows);
  return r;
}

namespace {

ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["seed"] = r.seed;
  j["window"] = r.window;
  j["length"] = r.length;
  j["attacks"] = ordered_json::array();
  for (const auto& a : r.attacks) {
    ordered_json ja;
    ja["attacker"] = a.attacker.value;
    ja["kind"] = a.kind;
    ja["injected_at"] = a.injected_at;
    ja["first_alert_at"] = a.first_alert_at ? ordered_json(*a.first_alert_at) : ordered_json();
    ja["detection_latency"] =
        a.detection_latency ? ordered_json(*a.detection_latency) : ordered_json();
    ja["detector"] = a.detector;
    ja["alert_kind"] = a.alert_kind;
    j["attacks"].push_back(std::move(ja));
  }
  j["clean_windows"] = r.clean_windows;
  j["false_positive_windows"] = r.false_positive_windows;
  j["false_positive_rate"] = r.false_positive_rate;
  j["isolation_violations"] = r.isolation_violations;
  j["suspect_entries"] = r.suspect_entries;
  j["red_alerts"] = r.red_alerts;
  j["ops"] = ordered_json::array();
  for (const auto& o : r.ops) {
    j["ops"].push_back({{"node", o.node.value}, {"role", o.role}, {"total", o.total}});
  }
  j["takeovers"] = ordered_json::array();
  for (const auto& t : r.takeovers) {
    ordered_json ids = ordered_json::array();
    for (NodeId n : t.transferred) ids.push_back(n.value);
    j["takeovers"].push_back({{"at", t.at},
                              {"failed", t.failed.value},
                              {"successor", t.successor.value},
                              {"transferred", std::move(ids)}});
  }
  return j;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string opt_tick(const std::optional<Tick>& t) {
  return t ? std::to_string(*t) : "-";
}

}  // namespace

std::string emit_report(const RunReport& r, ReportFormat format, bool color) {
  if (format == ReportFormat::Machine) return to_json(r).dump(2) + "\n";

  const std::string bold = color ? "\033[1m" : "";
  const std::string reset = color ? "\033[0m" : "";
  std::ostringstream os;
  char rate[32];
  std::snprintf(rate, sizeof rate, "%.4f%%", 100.0 * r.false_positive_rate);
  os << bold << "run" << reset << "  seed=" << r.seed << " window=" << r.window
     << " length=" << r.length << "\n";
  os << "false positives: " << r.false_positive_windows << " / " << r.clean_windows
     << " clean windows (" << rate << ")\n";
  os << "isolation violations: " << r.isolation_violations << "\n";
  os << "suspect entries: " << r.suspect_entries << "  red alerts: " << r.red_alerts << "\n\n";

  os << bold << pad("attacker", 10) << pad("attack", 11) << pad("injected", 10)
     << pad("alerted", 9) << pad("latency", 9) << pad("detector", 10) << "alert" << reset
     << "\n";
  for (const auto& a : r.attacks) {
    os << pad(to_string(a.attacker), 10) << pad(a.kind, 11)
       << pad(std::to_string(a.injected_at), 10) << pad(opt_tick(a.first_alert_at), 9)
       << pad(opt_tick(a.detection_latency), 9)
       << pad(a.detector.empty() ? "-" : a.detector, 10)
       << (a.alert_kind.empty() ? "-" : a.alert_kind) << "\n";
  }
  os << "\n" << bold << pad("tick", 8) << pad("failed", 8) << pad("successor", 11)
     << "transferred" << reset << "\n";
  for (const auto& t : r.takeovers) {
    std::string ids;
    for (NodeId n : t.transferred) ids += (ids.empty() ? "" : ",") + to_string(n);
    os << pad(std::to_string(t.at), 8) << pad(to_string(t.failed), 8)
       << pad(to_string(t.successor), 11) << (ids.empty() ? "-" : ids) << "\n";
  }
  os << "\n" << bold << pad("node", 8) << pad("role", 14) << "ids_ops" << reset << "\n";
  for (const auto& o : r.ops) {
    os << pad(to_string(o.node), 8) << pad(o.role, 14) << o.total << "\n";
  }
  return os.str();
}

RunReport parse_machine_report(std::string_view text) {
  RunReport r;
  try {
    auto j = nlohmann::json::parse(text);
    r.seed = j.at("seed").get<std::uint64_t>();
    r.window = j.at("window").get<Tick>();
    r.length = j.at("length").get<Tick>();
    for (const auto& ja : j.at("attacks")) {
      AttackOutcome a;
      a.attacker = NodeId{ja.at("attacker").get<std::uint32_t>()};
      a.kind = ja.at("kind").get<std::string>();
      a.injected_at = ja.at("injected_at").get<Tick>();
      if (!ja.at("first_alert_at").is_null()) a.first_alert_at = ja.at("first_alert_at").get<Tick>();
      if (!ja.at("detection_latency").is_null()) {
        a.detection_latency = ja.at("detection_latency").get<Tick>();
      }
      a.detector = ja.at("detector").get<std::string>();
      a.alert_kind = ja.at("alert_kind").get<std::string>();
      r.attacks.push_back(std::move(a));
    }
    r.clean_windows = j.at("clean_windows").get<std::uint64_t>();
    r.false_positive_windows = j.at("false_positive_windows").get<std::uint64_t>();
    r.false_positive_rate = j.at("false_positive_rate").get<double>();
    r.isolation_violations = j.at("isolation_violations").get<std::uint64_t>();
    r.suspect_entries = j.at("suspect_entries").get<std::uint64_t>();
    r.red_alerts = j.at("red_alerts").get<std::uint64_t>();
    for (const auto& o : j.at("ops")) {
      r.ops.push_back({NodeId{o.at("node").get<std::uint32_t>()}, o.at("role").get<std::string>(),
                       o.at("total").get<std::uint64_t>()});
    }
    for (const auto& t : j.at("takeovers")) {
      TakeoverSummary s;
      s.at = t.at("at").get<Tick>();
      s.failed = NodeId{t.at("failed").get<std::uint32_t>()};
      s.successor = NodeId{t.at("successor").get<std::uint32_t>()};
      for (const auto& n : t.at("transferred")) s.transferred.push_back(NodeId{n.get<std::uint32_t>()});
      r.takeovers.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed machine report: ") + e.what());
  }
  return r;
}

RunReport merge_reports(const std::vector<RunReport>& reports) {
  RunReport out;
  std::map<NodeId, NodeOps> ops;
  for (const auto& r : reports) {
    if (out.window == 0) {
      out.seed = r.seed;
      out.window = r.window;
    }
    out.length += r.length;
    out.attacks.insert(out.attacks.end(), r.attacks.begin(), r.attacks.end());
    out.clean_windows += r.clean_windows;
    out.false_positive_windows += r.false_positive_windows;
    out.isolation_violations += r.isolation_violations;
    out.suspect_entries += r.suspect_entries;
    out.red_alerts += r.red_alerts;
    for (const auto& o : r.ops) {
      auto [it, inserted] = ops.try_emplace(o.node, o);
      if (!inserted) it->second.total += o.total;
    }
    out.takeovers.insert(out.takeovers.end(), r.takeovers.begin(), r.takeovers.end());
  }
  for (auto& [_, o] : ops) out.ops.push_back(o);
  out.false_positive_rate = out.clean_windows == 0
                                ? 0.0
                                : static_cast<double>(out.false_positive_windows) /
                                      static_cast<double>(out.clean_windows);
  return out;
}

}  // namespace wsnids
