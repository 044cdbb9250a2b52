#include "wsnids/survivability.hpp"

#include <limits>

#include "wsnids/error.hpp"

namespace wsnids {

bool HeartbeatState::stale(NodeId n, Tick now) const {
  auto it = last_report.find(n);
  Tick last = it == last_report.end() ? 0 : it->second;
  return now > last && now - last > timeout;
}

std::vector<NodeId> detect_failure(const Topology& t, const HeartbeatState& hb,
                                   Tick now, const std::set<NodeId>& excluded) {
  std::vector<NodeId> out;
  std::set<NodeId> stale_regions;
  for (NodeId r : t.nodes_with_role(NodeRole::RegionalNode)) {
    if (excluded.count(r) || !hb.stale(r, now)) continue;
    out.push_back(r);
    stale_regions.insert(r);
  }
  for (NodeId c : t.nodes_with_role(NodeRole::ClusterNode)) {
    if (excluded.count(c) || !hb.stale(c, now)) continue;
    auto parent = t.parent_of(c);
    if (parent && (stale_regions.count(*parent) || excluded.count(*parent))) {
      continue;
    }
    out.push_back(c);
  }
  return out;
}

NodeId select_successor(const Topology& t, NodeId failed,
                        const std::function<bool(NodeId)>& live) {
  std::optional<NodeId> best;
  std::size_t best_load = std::numeric_limits<std::size_t>::max();
  for (NodeId peer : t.adjacent_peers(failed)) {  // ascending ids
    if (!live(peer)) continue;
    std::size_t load = t.children_of(peer).size();
    if (load < best_load) {
      best = peer;
      best_load = load;
    }
  }
  if (!best) {
    throw NoSuccessor("no live neighbour for " + t.label(failed));
  }
  return *best;
}

TakeoverRecord transfer_control(Topology& t, DomainMap& domains, NodeId failed,
                                NodeId successor, Tick at) {
  TakeoverRecord rec{failed, successor, at, t.children_of(failed)};
  for (NodeId child : rec.transferred) t.reparent(child, successor);
  domains.hand_over(failed, successor);
  return rec;
}

}  // namespace wsnids
