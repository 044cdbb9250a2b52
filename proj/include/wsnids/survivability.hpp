#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "wsnids/policy.hpp"
#include "wsnids/topology.hpp"

namespace wsnids {

/// Last report tick per intermediate node as seen by the base station.
struct HeartbeatState {
  std::map<NodeId, Tick> last_report;
  Tick timeout = 30;

  void record(NodeId n, Tick at) { last_report[n] = at; }
  /// now - last_report > timeout. Nodes never heard from count from tick 0.
  bool stale(NodeId n, Tick now) const;
};

/// Intermediate nodes past their timeout, regional nodes first. A cluster
/// node whose current parent is itself stale is masked: its silence is
/// explained by the parent and it is re-evaluated after reparenting.
/// `excluded` holds nodes already declared failed.
std::vector<NodeId> detect_failure(const Topology& t, const HeartbeatState& hb,
                                   Tick now, const std::set<NodeId>& excluded);

/// Live adjacent peer with the fewest children, lowest id on ties. Throws
/// NoSuccessor when none exists.
NodeId select_successor(const Topology& t, NodeId failed,
                        const std::function<bool(NodeId)>& live);

struct TakeoverRecord {
  NodeId failed;
  NodeId successor;
  Tick at = 0;
  std::vector<NodeId> transferred;
};

/// Reparents every child of `failed` under `successor` and hands the failed
/// node's domains over. Policy and class-state reprovisioning is done by
/// the caller, which owns the base station's stores.
TakeoverRecord transfer_control(Topology& t, DomainMap& domains, NodeId failed,
                                NodeId successor, Tick at);

}  // namespace wsnids
