#include "wsnids/response.hpp"

#include <algorithm>

#include "wsnids/error.hpp"

namespace wsnids {

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Fresh: return "Fresh";
    case NodeClass::Member: return "Member";
    case NodeClass::Unstable: return "Unstable";
    case NodeClass::Suspect: return "Suspect";
    case NodeClass::Malicious: return "Malicious";
  }
  return "?";
}

std::optional<NodeClass> parse_node_class(std::string_view s) {
  for (NodeClass c : kAllClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  return v == Verdict::Good ? "Good" : "Misbehaving";
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::EmitRedAlert: return "EmitRedAlert";
    case Action::Quarantine: return "Quarantine";
    case Action::Reconnect: return "Reconnect";
    case Action::PermanentBan: return "PermanentBan";
  }
  return "?";
}

ResponseParams ResponseParams::for_window(Tick w) {
  ResponseParams p;
  p.probation_ticks = 10 * w;
  p.unstable_ticks = 5 * w;
  p.oscillation_limit = 3;
  p.oscillation_window = 30 * w;
  p.misbehave_limit_ticks = 5 * w;
  p.ban_ticks = 20 * w;
  p.reobserve_ticks = 10 * w;
  return p;
}

bool ResponseParams::valid() const {
  return probation_ticks >= 1 && unstable_ticks >= 1 &&
         oscillation_limit >= 1 && oscillation_window >= 1 &&
         misbehave_limit_ticks >= 1 && ban_ticks >= 1 && reobserve_ticks >= 1;
}

Observation watchdog_verdict(NodeId node, Tick now,
                             std::span<const Finding> findings) {
  bool bad = std::any_of(findings.begin(), findings.end(),
                         [&](const Finding& f) { return f.subject == node; });
  return {node, now, bad ? Verdict::Misbehaving : Verdict::Good};
}

namespace {

void enter(NodeClassState& s, NodeClass c, Tick now) {
  s.cls = c;
  s.entered_at = now;
}

TransitionResult to_suspect(NodeClassState s, Tick now,
                            const ResponseParams& p, std::string_view why) {
  enter(s, NodeClass::Suspect, now);
  s.banned_until = now + p.ban_ticks;
  s.misbehave_since.reset();
  s.last_misbehave.reset();
  s.oscillations.clear();
  return {std::move(s), {Action::EmitRedAlert, Action::Quarantine}, why};
}

}  // namespace

TransitionResult transition(const NodeClassState& in, const Observation& o,
                            Tick now, const ResponseParams& p) {
  if (o.node != in.node) {
    throw InvalidObservation("observation for node " + to_string(o.node) +
                             " applied to node " + to_string(in.node));
  }
  NodeClassState s = in;
  const bool bad = o.verdict == Verdict::Misbehaving;

  switch (s.cls) {
    case NodeClass::Malicious:
      return {std::move(s), {}, {}};

    case NodeClass::Fresh:
      if (bad) return to_suspect(std::move(s), now, p, "fresh-misbehaving");
      if (now - s.entered_at >= p.probation_ticks) {
        enter(s, NodeClass::Member, now);
        s.oscillations.clear();
        return {std::move(s), {}, "probation-passed"};
      }
      return {std::move(s), {}, {}};

    case NodeClass::Member:
      if (bad) {
        enter(s, NodeClass::Unstable, now);
        std::erase_if(s.oscillations, [&](Tick t) {
          return now - t >= p.oscillation_window;
        });
        s.oscillations.push_back(now);
        s.misbehave_since = now;
        s.last_misbehave = now;
        return {std::move(s), {}, "misbehaving"};
      }
      return {std::move(s), {}, {}};

    case NodeClass::Unstable: {
      std::erase_if(s.oscillations,
                    [&](Tick t) { return now - t >= p.oscillation_window; });
      if (s.oscillations.size() >= p.oscillation_limit) {
        return to_suspect(std::move(s), now, p, "oscillation");
      }
      if (bad) {
        if (!s.misbehave_since) s.misbehave_since = now;
        s.last_misbehave = now;
        if (now - *s.misbehave_since >= p.misbehave_limit_ticks) {
          return to_suspect(std::move(s), now, p, "persistent-misbehaving");
        }
        return {std::move(s), {}, {}};
      }
      s.misbehave_since.reset();
      const Tick since = s.last_misbehave.value_or(s.entered_at);
      if (now - since >= p.unstable_ticks) {
        enter(s, NodeClass::Member, now);
        s.last_misbehave.reset();
        return {std::move(s), {}, "recovered"};
      }
      return {std::move(s), {}, {}};
    }

    case NodeClass::Suspect: {
      const Tick until = s.banned_until.value_or(s.entered_at);
      if (now <= until) return {std::move(s), {}, {}};  // still quarantined
      if (bad) {
        enter(s, NodeClass::Malicious, now);
        s.banned_until.reset();
        return {std::move(s), {Action::PermanentBan}, "misbehaving-after-reconnect"};
      }
      if (now - until >= p.reobserve_ticks) {
        enter(s, NodeClass::Unstable, now);
        s.banned_until.reset();
        s.oscillations.clear();
        s.misbehave_since.reset();
        s.last_misbehave = now;
        return {std::move(s), {Action::Reconnect}, "reobserved-good"};
      }
      return {std::move(s), {}, {}};
    }
  }
  return {std::move(s), {}, {}};
}

bool admits_traffic(const NodeClassState& s, Tick now) {
  switch (s.cls) {
    case NodeClass::Malicious: return false;
    case NodeClass::Suspect: return s.banned_until && now >= *s.banned_until;
    default: return true;
  }
}

}  // namespace wsnids
