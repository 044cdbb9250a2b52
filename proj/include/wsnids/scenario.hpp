#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsnids/policy.hpp"
#include "wsnids/topology.hpp"
#include "wsnids/traffic.hpp"

namespace wsnids {

/// Policy injected by the base station at a given tick (the runtime
/// intrusion-detection-tool schedule).
struct ScheduledPolicy {
  Tick at = 0;
  PolicyBody body;
  Scope scope;
};

struct FailureSpec {
  Tick at = 0;
  NodeId node;
};

struct Scenario {
  TopologySpec topology_spec;
  Topology topology;
  TrafficModel traffic;
  std::vector<ScheduledPolicy> policies;
  std::vector<AttackSpec> attacks;
  std::vector<FailureSpec> failures;
  Tick run_length = 0;
  Tick window = 10;
  Tick hop_latency = 1;
  /// 0 selects the default of three windows.
  Tick heartbeat_timeout = 0;

  Tick effective_timeout() const {
    return heartbeat_timeout ? heartbeat_timeout : 3 * window;
  }
};

/// Every consistency problem; empty when the scenario can run.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Parses the sectioned text format and validates it. Throws ParseError or
/// ValidationError.
Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace wsnids
