#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wsnids/ida.hpp"
#include "wsnids/topology.hpp"

namespace wsnids {

enum class NodeClass { Fresh, Member, Unstable, Suspect, Malicious };

inline constexpr std::array<NodeClass, 5> kAllClasses = {
    NodeClass::Fresh, NodeClass::Member, NodeClass::Unstable,
    NodeClass::Suspect, NodeClass::Malicious};

std::string_view to_string(NodeClass c);
std::optional<NodeClass> parse_node_class(std::string_view s);

/// All durations are in ticks.
struct ResponseParams {
  Tick probation_ticks = 100;
  Tick unstable_ticks = 50;
  std::uint32_t oscillation_limit = 3;
  Tick oscillation_window = 300;
  Tick misbehave_limit_ticks = 50;
  Tick ban_ticks = 200;
  Tick reobserve_ticks = 100;

  /// Defaults expressed in detection windows: probation 10, unstable 5,
  /// oscillation 3 within 30, misbehave limit 5, ban 20, reobserve 10.
  static ResponseParams for_window(Tick window);
  bool valid() const;
  bool operator==(const ResponseParams&) const = default;
};

enum class Verdict { Good, Misbehaving };
std::string_view to_string(Verdict v);

struct Observation {
  NodeId node;
  Tick at = 0;
  Verdict verdict = Verdict::Good;
};

struct NodeClassState {
  NodeId node;
  NodeClass cls = NodeClass::Fresh;
  Tick entered_at = 0;
  /// Ticks of Member->Unstable entries still inside the oscillation window.
  std::vector<Tick> oscillations;
  /// First tick of the current unbroken run of Misbehaving verdicts.
  std::optional<Tick> misbehave_since;
  /// Last Misbehaving verdict while Unstable; the Good streak runs from here.
  std::optional<Tick> last_misbehave;
  /// End of temporary quarantine; set only while Suspect.
  std::optional<Tick> banned_until;

  static NodeClassState fresh(NodeId node, Tick now) {
    NodeClassState s;
    s.node = node;
    s.entered_at = now;
    return s;
  }
  bool operator==(const NodeClassState&) const = default;
};

enum class Action { EmitRedAlert, Quarantine, Reconnect, PermanentBan };
std::string_view to_string(Action a);

struct TransitionResult {
  NodeClassState state;
  std::vector<Action> actions;
  /// Short cause for the class change; empty when the class is unchanged.
  std::string_view reason;
};

/// Misbehaving iff the window produced a misuse or anomaly finding for the
/// vector's node.
Observation watchdog_verdict(NodeId node, Tick now,
                             std::span<const Finding> findings);

/// One step of the classification machine. Throws InvalidObservation when
/// the observation is for a different node.
TransitionResult transition(const NodeClassState& s, const Observation& o,
                            Tick now, const ResponseParams& params);

bool admits_traffic(const NodeClassState& s, Tick now);

}  // namespace wsnids
