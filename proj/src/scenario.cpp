#include "wsnids/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wsnids/error.hpp"

namespace wsnids {

namespace {

struct Record {
  int line = 0;
  std::map<std::string, std::string> kv;
};

struct RawScenario {
  std::map<std::string, Record> topology, traffic, run;  // key -> (line, value)
  std::vector<Record> policies, attacks, failures;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits on whitespace outside double quotes and drops a trailing comment.
std::vector<std::string> tokenize(const std::string& line, int lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool have = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      have = true;
      continue;
    }
    if (!quoted && c == '#') break;
    if (!quoted && (c == ' ' || c == '\t' || c == '\r')) {
      if (have) out.push_back(std::move(cur));
      cur.clear();
      have = false;
      continue;
    }
    cur += c;
    have = true;
  }
  if (quoted) throw ParseError(lineno, "unterminated quote");
  if (have) out.push_back(std::move(cur));
  return out;
}

std::uint64_t parse_u64(const std::string& v, int line, const std::string& key) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ParseError(line, "field '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double parse_f64(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError(line, "field '" + key + "': expected a number, got '" + v + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& v,
                                                             int line,
                                                             const std::string& key) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto dash = item.find('-');
    if (dash == std::string::npos) {
      throw ParseError(line, "field '" + key + "': expected A-B, got '" + item + "'");
    }
    out.emplace_back(trim(item.substr(0, dash)), trim(item.substr(dash + 1)));
  }
  return out;
}

RawScenario read_raw(std::istream& in) {
  static const std::set<std::string> kSections = {
      "topology", "traffic", "policies", "attacks", "failures", "run"};
  static const std::map<std::string, std::string> kRecordWord = {
      {"policies", "policy"}, {"attacks", "attack"}, {"failures", "fail"}};
  RawScenario raw;
  std::string section;
  std::string text;
  int lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    std::string line = trim(text);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      auto close = line.find(']');
      if (close == std::string::npos) throw ParseError(lineno, "unterminated section header");
      section = trim(line.substr(1, close - 1));
      if (!kSections.count(section)) {
        throw ParseError(lineno, "unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) throw ParseError(lineno, "entry outside any section");

    if (section == "topology" || section == "traffic" || section == "run") {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = line.substr(eq + 1);
      auto hash = value.find('#');
      if (hash != std::string::npos) value = value.substr(0, hash);
      value = trim(value);
      auto& dest = section == "topology" ? raw.topology
                   : section == "traffic" ? raw.traffic
                                          : raw.run;
      if (dest.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
      dest[key] = Record{lineno, {{"value", value}}};
      continue;
    }

    auto tokens = tokenize(line, lineno);
    if (tokens.empty()) continue;
    Record rec{lineno, {}};
    std::size_t first = tokens[0] == kRecordWord.at(section) ? 1 : 0;
    for (std::size_t i = first; i < tokens.size(); ++i) {
      auto eq = tokens[i].find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParseError(lineno, "expected key=value, got '" + tokens[i] + "'");
      }
      std::string key = tokens[i].substr(0, eq);
      if (rec.kv.count(key)) throw ParseError(lineno, "duplicate field '" + key + "'");
      rec.kv[key] = tokens[i].substr(eq + 1);
    }
    (section == "policies" ? raw.policies
     : section == "attacks" ? raw.attacks
                            : raw.failures)
        .push_back(std::move(rec));
  }
  return raw;
}

class Resolver {
 public:
  Resolver(const Topology& t, std::vector<std::string>& errors) : t_(t), errors_(errors) {}

  std::optional<NodeId> node(const std::string& ref, int line, const std::string& what) {
    if (auto id = t_.find(ref)) return id;
    if (!ref.empty() && std::all_of(ref.begin(), ref.end(), ::isdigit)) {
      NodeId id{static_cast<std::uint32_t>(std::stoul(ref))};
      if (t_.contains(id)) return id;
    }
    errors_.push_back("line " + std::to_string(line) + ": " + what +
                      " references undeclared node '" + ref + "'");
    return std::nullopt;
  }

 private:
  const Topology& t_;
  std::vector<std::string>& errors_;
};

void check_known(const Record& r, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : r.kv) {
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) throw ParseError(r.line, "unknown field '" + k + "'");
  }
}

const std::string* field(const Record& r, const std::string& key) {
  auto it = r.kv.find(key);
  return it == r.kv.end() ? nullptr : &it->second;
}

const std::string& require(const Record& r, const std::string& key) {
  const auto* v = field(r, key);
  if (!v) throw ParseError(r.line, "missing field '" + key + "'");
  return *v;
}

SignaturePredicate parse_when(const std::string& text, int line) {
  SignaturePredicate p;
  std::stringstream ss(text);
  std::string clause;
  while (std::getline(ss, clause, '&')) {
    static const std::pair<const char*, Comparison> kOps[] = {
        {">=", Comparison::GreaterEqual},
        {"<=", Comparison::LessEqual},
        {">", Comparison::Greater},
        {"<", Comparison::Less}};
    bool done = false;
    for (const auto& [tok, op] : kOps) {
      auto pos = clause.find(tok);
      if (pos == std::string::npos) continue;
      auto f = parse_feature(clause.substr(0, pos));
      if (!f) throw ParseError(line, "unknown feature in '" + clause + "'");
      p.bounds.push_back({*f, op, parse_f64(clause.substr(pos + std::string(tok).size()), line, "when")});
      done = true;
      break;
    }
    if (!done) throw ParseError(line, "bad threshold clause '" + clause + "'");
  }
  return p;
}

bool valid_identifier(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> errs;
  if (s.run_length < 1) errs.push_back("run length >= 1");
  if (s.window < 1) errs.push_back("window >= 1");
  if (s.hop_latency < 1) errs.push_back("hop latency >= 1");
  for (const auto& v : validate(s.topology)) {
    std::string nodes;
    for (NodeId n : v.nodes) nodes += " " + to_string(n);
    errs.push_back("topology: " + v.rule + " (nodes" + nodes + ")");
  }
  if (!(s.traffic.default_mean > 0.0)) errs.push_back("traffic mean must be > 0");
  for (const auto& [n, mean] : s.traffic.sensor_mean) {
    if (!s.topology.contains(n) || s.topology.role(n) != NodeRole::Sensor) {
      errs.push_back("traffic rate for non-sensor node " + to_string(n));
    }
    if (!(mean > 0.0)) errs.push_back("traffic rate for node " + to_string(n) + " must be > 0");
  }

  auto label = [&](NodeId n) {
    return s.topology.contains(n) ? s.topology.label(n) : to_string(n);
  };
  std::map<NodeId, std::vector<const AttackSpec*>> by_node;
  for (const auto& a : s.attacks) {
    if (!s.topology.contains(a.attacker)) {
      errs.push_back("attack references undeclared node '" + to_string(a.attacker) + "'");
      continue;
    }
    if (s.topology.role(a.attacker) != NodeRole::Sensor) {
      errs.push_back("attacker " + label(a.attacker) + " is not a sensor");
    }
    if (a.start >= a.stop) errs.push_back("attack on " + label(a.attacker) + ": start < stop");
    if (a.start >= s.run_length || a.stop > s.run_length) {
      errs.push_back("attack on " + label(a.attacker) + " outside run length");
    }
    if (a.kind == AttackKind::PacketDrop && !(a.drop_rate >= 0.0 && a.drop_rate <= 1.0)) {
      errs.push_back("attack on " + label(a.attacker) + ": drop rate in [0,1]");
    }
    if (a.kind == AttackKind::Flood && a.multiplier < 1) {
      errs.push_back("attack on " + label(a.attacker) + ": flood multiplier >= 1");
    }
    if (a.kind == AttackKind::KnownSignature && !valid_identifier(a.signature)) {
      errs.push_back("attack on " + label(a.attacker) + ": bad signature id");
    }
    for (const AttackSpec* other : by_node[a.attacker]) {
      if (a.start < other->stop && other->start < a.stop) {
        errs.push_back("overlapping attacks on " + label(a.attacker));
      }
    }
    by_node[a.attacker].push_back(&a);
  }
  for (const auto& f : s.failures) {
    if (!s.topology.contains(f.node)) {
      errs.push_back("failure references undeclared node '" + to_string(f.node) + "'");
      continue;
    }
    auto role = s.topology.role(f.node);
    if (role != NodeRole::RegionalNode && role != NodeRole::ClusterNode) {
      errs.push_back("only regional or cluster nodes can fail (" + label(f.node) + ")");
    }
    if (f.at >= s.run_length) errs.push_back("failure of " + label(f.node) + " outside run length");
  }
  for (const auto& p : s.policies) {
    if (p.at > s.run_length) errs.push_back("policy at tick " + std::to_string(p.at) + " outside run length");
    if (p.scope.kind != ScopeKind::All) {
      NodeRole want = p.scope.kind == ScopeKind::Region ? NodeRole::RegionalNode
                                                        : NodeRole::ClusterNode;
      if (!s.topology.contains(p.scope.target) || s.topology.role(p.scope.target) != want) {
        errs.push_back("policy scope " + to_string(p.scope) + " does not name a " +
                       std::string(to_string(want)));
      }
    }
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, SignatureRecord>) {
            if (!valid_identifier(body.id)) errs.push_back("signature id '" + body.id + "' invalid");
            if (!body.predicate.tag && body.predicate.bounds.empty()) {
              errs.push_back("signature " + body.id + " needs tag= or when=");
            }
          } else if constexpr (std::is_same_v<T, NormalProfile>) {
            if (!(body.anomaly_threshold > 0.0)) errs.push_back("profile threshold k > 0");
            for (Feature f : kFeatureOrder) {
              auto it = body.features.find(f);
              if (it == body.features.end()) {
                errs.push_back("profile lacks " + std::string(to_string(f)));
              } else if (!(it->second.stdev > 0.0)) {
                errs.push_back("profile stdev for " + std::string(to_string(f)) + " must be > 0");
              }
            }
          } else if constexpr (std::is_same_v<T, ResponseParams>) {
            if (!body.valid()) errs.push_back("response durations >= 1 and oscillation limit >= 1");
          } else {
            if (!s.topology.contains(body.node) || s.topology.role(body.node) != NodeRole::Sensor) {
              errs.push_back("ban references non-sensor node " + to_string(body.node));
            }
          }
        },
        p.body);
  }
  return errs;
}

Scenario parse_scenario(std::istream& in) {
  RawScenario raw = read_raw(in);
  Scenario s;

  static const std::set<std::string> kTopoKeys = {
      "regions", "clusters_per_region", "sensors_per_cluster", "region_adjacency",
      "cluster_adjacency"};
  for (const auto& [k, r] : raw.topology) {
    if (!kTopoKeys.count(k)) throw ParseError(r.line, "unknown topology key '" + k + "'");
  }
  auto topo_u = [&](const char* key) -> std::size_t {
    auto it = raw.topology.find(key);
    if (it == raw.topology.end()) return 1;
    return parse_u64(it->second.kv.at("value"), it->second.line, key);
  };
  s.topology_spec.regions = topo_u("regions");
  s.topology_spec.clusters_per_region = topo_u("clusters_per_region");
  s.topology_spec.sensors_per_cluster = topo_u("sensors_per_cluster");
  if (auto it = raw.topology.find("region_adjacency"); it != raw.topology.end()) {
    s.topology_spec.region_adjacency =
        parse_pairs(it->second.kv.at("value"), it->second.line, "region_adjacency");
  }
  if (auto it = raw.topology.find("cluster_adjacency"); it != raw.topology.end()) {
    s.topology_spec.cluster_adjacency =
        parse_pairs(it->second.kv.at("value"), it->second.line, "cluster_adjacency");
  }
  try {
    s.topology = build_topology(s.topology_spec);
  } catch (const SpecError& e) {
    throw ValidationError({std::string("topology: ") + e.what()});
  }

  for (const auto& [k, r] : raw.run) {
    const std::string& v = r.kv.at("value");
    if (k == "length") s.run_length = parse_u64(v, r.line, k);
    else if (k == "window") s.window = parse_u64(v, r.line, k);
    else if (k == "latency") s.hop_latency = parse_u64(v, r.line, k);
    else if (k == "heartbeat_timeout") s.heartbeat_timeout = parse_u64(v, r.line, k);
    else throw ParseError(r.line, "unknown run key '" + k + "'");
  }

  std::vector<std::string> errors;
  Resolver resolve(s.topology, errors);

  for (const auto& [k, r] : raw.traffic) {
    const std::string& v = r.kv.at("value");
    if (k == "mean") {
      s.traffic.default_mean = parse_f64(v, r.line, k);
    } else if (k.rfind("rate.", 0) == 0) {
      if (auto n = resolve.node(k.substr(5), r.line, "traffic rate")) {
        s.traffic.sensor_mean[*n] = parse_f64(v, r.line, k);
      }
    } else {
      throw ParseError(r.line, "unknown traffic key '" + k + "'");
    }
  }

  const ResponseParams defaults = ResponseParams::for_window(s.window ? s.window : 10);
  for (const auto& r : raw.policies) {
    ScheduledPolicy sp;
    sp.at = parse_u64(require(r, "at"), r.line, "at");
    if (const auto* scope = field(r, "scope"); scope && *scope != "all") {
      auto colon = scope->find(':');
      std::string kind = scope->substr(0, colon);
      if (colon == std::string::npos || (kind != "region" && kind != "cluster")) {
        throw ParseError(r.line, "scope must be all, region:<R>, or cluster:<C>");
      }
      auto target = resolve.node(scope->substr(colon + 1), r.line, "policy scope");
      if (!target) continue;
      sp.scope = kind == "region" ? Scope::region(*target) : Scope::cluster(*target);
    }
    const std::string& kind = require(r, "kind");
    if (kind == "signature") {
      check_known(r, {"at", "kind", "scope", "id", "tag", "when", "desc"});
      SignatureRecord rec;
      rec.id = require(r, "id");
      if (const auto* when = field(r, "when")) rec.predicate = parse_when(*when, r.line);
      if (const auto* tag = field(r, "tag")) rec.predicate.tag = *tag;
      if (const auto* desc = field(r, "desc")) rec.description = *desc;
      sp.body = std::move(rec);
    } else if (kind == "profile") {
      check_known(r, {"at", "kind", "scope", "k", "pkt_rate", "drop_ratio", "fwd_ratio",
                      "dup_count"});
      NormalProfile prof;
      if (const auto* k = field(r, "k")) prof.anomaly_threshold = parse_f64(*k, r.line, "k");
      for (Feature f : kFeatureOrder) {
        const auto* v = field(r, std::string(to_string(f)));
        if (!v) continue;
        auto colon = v->find(':');
        if (colon == std::string::npos) {
          throw ParseError(r.line, "profile feature expects mean:stdev");
        }
        prof.features[f] = {parse_f64(v->substr(0, colon), r.line, std::string(to_string(f))),
                            parse_f64(v->substr(colon + 1), r.line, std::string(to_string(f)))};
      }
      sp.body = std::move(prof);
    } else if (kind == "response") {
      check_known(r, {"at", "kind", "scope", "probation", "unstable", "osc_limit", "osc_window",
                      "misbehave_limit", "ban", "reobserve"});
      ResponseParams p = defaults;
      auto opt = [&](const char* key, auto& dest) {
        if (const auto* v = field(r, key)) {
          dest = static_cast<std::remove_reference_t<decltype(dest)>>(parse_u64(*v, r.line, key));
        }
      };
      opt("probation", p.probation_ticks);
      opt("unstable", p.unstable_ticks);
      opt("osc_limit", p.oscillation_limit);
      opt("osc_window", p.oscillation_window);
      opt("misbehave_limit", p.misbehave_limit_ticks);
      opt("ban", p.ban_ticks);
      opt("reobserve", p.reobserve_ticks);
      sp.body = p;
    } else if (kind == "ban") {
      check_known(r, {"at", "kind", "scope", "node"});
      auto n = resolve.node(require(r, "node"), r.line, "ban policy");
      if (!n) continue;
      sp.body = BanEntry{*n};
    } else {
      throw ParseError(r.line, "unknown policy kind '" + kind + "'");
    }
    s.policies.push_back(std::move(sp));
  }

  for (const auto& r : raw.attacks) {
    check_known(r, {"node", "kind", "rate", "multiplier", "sig", "start", "stop"});
    AttackSpec a;
    const std::string& kind = require(r, "kind");
    if (kind == "drop") {
      a.kind = AttackKind::PacketDrop;
      a.drop_rate = parse_f64(require(r, "rate"), r.line, "rate");
    } else if (kind == "flood") {
      a.kind = AttackKind::Flood;
      a.multiplier = static_cast<std::uint32_t>(
          parse_u64(require(r, "multiplier"), r.line, "multiplier"));
    } else if (kind == "replay") {
      a.kind = AttackKind::Replay;
    } else if (kind == "signature") {
      a.kind = AttackKind::KnownSignature;
      a.signature = require(r, "sig");
    } else {
      throw ParseError(r.line, "unknown attack kind '" + kind + "'");
    }
    a.start = parse_u64(require(r, "start"), r.line, "start");
    a.stop = parse_u64(require(r, "stop"), r.line, "stop");
    auto n = resolve.node(require(r, "node"), r.line, "attack");
    if (!n) continue;
    a.attacker = *n;
    s.attacks.push_back(std::move(a));
  }

  for (const auto& r : raw.failures) {
    check_known(r, {"node", "at"});
    Tick at = parse_u64(require(r, "at"), r.line, "at");
    auto n = resolve.node(require(r, "node"), r.line, "failure");
    if (!n) continue;
    s.failures.push_back({at, *n});
  }

  for (auto& e : validate_scenario(s)) errors.push_back(std::move(e));
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_scenario(in);
}

}  // namespace wsnids
