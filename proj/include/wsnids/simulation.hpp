#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wsnids/engine.hpp"
#include "wsnids/ida.hpp"
#include "wsnids/policy.hpp"
#include "wsnids/response.hpp"
#include "wsnids/rng.hpp"
#include "wsnids/scenario.hpp"
#include "wsnids/survivability.hpp"
#include "wsnids/traffic.hpp"

namespace wsnids {

/// A whole network of agents wired onto one Engine. Owns the live topology,
/// so takeover can reparent nodes between dispatches.
class Simulation {
 public:
  Simulation(const Scenario& scenario, RngSeed seed);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const EventLog& run_until(Tick end);
  /// Runs to the scenario length and appends the per-node Ops summary.
  const EventLog& run();
  /// Appends one Ops record per node. Called once, after the last run_until.
  void finish();

  /// Issues a policy at the base station now and disseminates it.
  Policy issue_policy(PolicyBody body, Scope scope);

  Tick now() const { return engine_.now(); }
  const Topology& topology() const { return topology_; }
  const DomainMap& domains() const { return domains_; }
  const Bpdp& bpdp() const { return bpdp_; }
  const PolicyRepository& repository(NodeId agent) const;
  const EffectivePolicy& effective(NodeId agent) const;
  /// State held by the LPA currently responsible for the sensor.
  const NodeClassState* class_state(NodeId sensor) const;
  const OpCounter& ops(NodeId node) const;
  bool live(NodeId n) const { return live_.count(n) != 0; }
  const std::vector<TakeoverRecord>& takeovers() const { return takeovers_; }
  const HeartbeatState& heartbeats() const { return heartbeats_; }
  const std::map<NodeId, NodeClassState>& bpdp_mirrors() const {
    return bpdp_mirrors_;
  }
  const EventLog& log() const { return engine_.log(); }
  const Scenario& scenario() const { return scenario_; }

 private:
  struct Agent {
    PolicyRepository repo;
    EffectivePolicy effective;
    OpCounter ops;
    // LPA only
    std::vector<TrafficRecord> window;
    std::map<NodeId, NodeClassState> classes;
    std::set<NodeId> local_bans;
    // RPA only
    std::map<NodeId, NodeClassState> mirrors;
  };

  void on_event(const Event& e);
  void on_clock(Tick t);
  void on_traffic(const TrafficRecord& r);
  void on_delivery(const Delivery& d);

  void check_failures(Tick t);
  void take_over(NodeId failed, Tick t);
  void reprovision(NodeId agent);
  void lpa_close_window(NodeId lpa, Tick t);
  void rpa_heartbeat(NodeId rpa, Tick t);
  void rpa_on_report(NodeId rpa, const ReportMsg& report);
  void apply_at(NodeId agent, const Policy& p);
  void forward_policy(NodeId rpa, const Policy& p);
  void generate_traffic(Tick t);

  Agent& agent(NodeId id);
  NodeId bs() const { return bpdp_.id(); }

  Scenario scenario_;
  RngSeed seed_;
  Topology topology_;
  Engine engine_;
  DomainMap domains_;
  Bpdp bpdp_;
  ResponseParams default_response_;
  std::map<NodeId, Agent> agents_;
  std::map<NodeId, OpCounter> sensor_ops_;  // stays zero: sensors host no IDS
  std::map<NodeId, NodeClassState> bpdp_mirrors_;
  std::set<NodeId> live_;
  std::set<NodeId> declared_failed_;
  HeartbeatState heartbeats_;
  std::vector<TakeoverRecord> takeovers_;
  std::map<NodeId, SensorTrafficSource> sources_;
  std::map<NodeId, Stream> attack_streams_;
  std::map<NodeId, AttackSpec> active_attacks_;
  bool finished_ = false;
};

}  // namespace wsnids
