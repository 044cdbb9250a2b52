#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsnids {

/// Simulation time in abstract ticks.
using Tick = std::uint64_t;

/// Stable per-run node identifier. This is the "unique ID" written into
/// ban entries when a node is permanently excluded.
struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

inline std::string to_string(NodeId id) { return std::to_string(id.value); }

enum class NodeRole { BaseStation, RegionalNode, ClusterNode, Sensor };

std::string_view to_string(NodeRole role);

struct TopologySpec {
  std::size_t regions = 1;
  std::size_t clusters_per_region = 1;
  std::size_t sensors_per_cluster = 1;
  /// Pairs of region labels ("R1", "R2", ...).
  std::vector<std::pair<std::string, std::string>> region_adjacency;
  /// Pairs of cluster labels ("C1.1", ...). When absent every cluster is
  /// adjacent to every other cluster of its own region.
  std::optional<std::vector<std::pair<std::string, std::string>>>
      cluster_adjacency;
};

struct Violation {
  std::string rule;
  std::vector<NodeId> nodes;
};

/// Four-level tree: base station, regional nodes, cluster nodes, sensors.
/// Sibling adjacency is kept separately and only consulted for failover.
class Topology {
 public:
  struct Node {
    NodeRole role;
    std::optional<NodeId> parent;
    std::string label;
    /// Parent at construction time. Takeover reparents nodes but the home
    /// never changes; policy scopes and cluster adjacency are keyed on it.
    std::optional<NodeId> home;
  };

  /// Adds a node. Throws SpecError on a duplicate id. Structural rules are
  /// checked by validate(), not here, so malformed trees can be represented.
  void add_node(NodeId id, NodeRole role, std::optional<NodeId> parent,
                std::string label = {});
  /// Inserts both (a,b) and (b,a) unless a == b.
  void add_adjacency(NodeId a, NodeId b);
  /// Inserts exactly (a,b); for building malformed relations in tests.
  void add_directed_adjacency(NodeId a, NodeId b);

  bool contains(NodeId n) const { return nodes_.count(n) != 0; }
  const Node& node(NodeId n) const;
  NodeRole role(NodeId n) const { return node(n).role; }
  const std::string& label(NodeId n) const { return node(n).label; }
  std::optional<NodeId> find(std::string_view label) const;

  std::optional<NodeId> parent_of(NodeId n) const;
  /// Children in ascending id order.
  std::vector<NodeId> children_of(NodeId n) const;
  std::set<NodeId> descendants_of(NodeId n) const;
  /// Region a cluster was built under, or cluster a sensor was built under.
  std::optional<NodeId> home_of(NodeId n) const { return node(n).home; }

  std::vector<NodeId> nodes_with_role(NodeRole role) const;
  std::optional<NodeId> base_station() const;
  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const;
  const std::map<NodeId, Node>& nodes() const { return nodes_; }

  /// Peers adjacent to n in the relation matching n's role, ascending.
  std::vector<NodeId> adjacent_peers(NodeId n) const;
  bool adjacent(NodeId a, NodeId b) const;
  const std::set<std::pair<NodeId, NodeId>>& adjacency() const {
    return adjacency_;
  }

  /// True iff (a,b) is a parent-child edge in either direction.
  bool is_tree_edge(NodeId a, NodeId b) const;

  /// Moves child under new_parent. Used by takeover only.
  void reparent(NodeId child, NodeId new_parent);

 private:
  std::map<NodeId, Node> nodes_;
  std::map<NodeId, std::vector<NodeId>> children_;
  std::set<std::pair<NodeId, NodeId>> adjacency_;
};

/// Builds the hierarchy with breadth-first id assignment: base station 0,
/// then regions, then clusters, then sensors. Labels are "BS", "R<i>",
/// "C<i>.<j>", "S<i>.<j>.<k>" (1-based).
Topology build_topology(const TopologySpec& spec);

std::optional<NodeId> parent_of(const Topology& t, NodeId n);
std::set<NodeId> descendants_of(const Topology& t, NodeId n);

/// Empty iff every structural invariant holds.
std::vector<Violation> validate(const Topology& t);

}  // namespace wsnids

template <>
struct std::hash<wsnids::NodeId> {
  std::size_t operator()(wsnids::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
