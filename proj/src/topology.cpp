#include "wsnids/topology.hpp"

#include <algorithm>
#include <deque>

#include "wsnids/error.hpp"

namespace wsnids {

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::BaseStation: return "BaseStation";
    case NodeRole::RegionalNode: return "RegionalNode";
    case NodeRole::ClusterNode: return "ClusterNode";
    case NodeRole::Sensor: return "Sensor";
  }
  return "?";
}

void Topology::add_node(NodeId id, NodeRole role, std::optional<NodeId> parent,
                        std::string label) {
  if (nodes_.count(id)) {
    throw SpecError("duplicate node id " + to_string(id));
  }
  if (label.empty()) label = "#" + to_string(id);
  nodes_.emplace(id, Node{role, parent, std::move(label), parent});
  children_[id];
  if (parent) {
    auto& siblings = children_[*parent];
    siblings.insert(std::lower_bound(siblings.begin(), siblings.end(), id), id);
  }
}

void Topology::add_adjacency(NodeId a, NodeId b) {
  adjacency_.emplace(a, b);
  adjacency_.emplace(b, a);
}

void Topology::add_directed_adjacency(NodeId a, NodeId b) {
  adjacency_.emplace(a, b);
}

const Topology::Node& Topology::node(NodeId n) const {
  auto it = nodes_.find(n);
  if (it == nodes_.end()) throw UnknownNode("unknown node " + to_string(n));
  return it->second;
}

std::optional<NodeId> Topology::find(std::string_view label) const {
  for (const auto& [id, info] : nodes_) {
    if (info.label == label) return id;
  }
  return std::nullopt;
}

std::optional<NodeId> Topology::parent_of(NodeId n) const {
  return node(n).parent;
}

std::vector<NodeId> Topology::children_of(NodeId n) const {
  node(n);
  auto it = children_.find(n);
  return it == children_.end() ? std::vector<NodeId>{} : it->second;
}

std::set<NodeId> Topology::descendants_of(NodeId n) const {
  std::set<NodeId> out;
  std::deque<NodeId> frontier{n};
  node(n);
  while (!frontier.empty()) {
    NodeId cur = frontier.front();
    frontier.pop_front();
    auto it = children_.find(cur);
    if (it == children_.end()) continue;
    for (NodeId c : it->second) {
      if (out.insert(c).second) frontier.push_back(c);
    }
  }
  return out;
}

std::vector<NodeId> Topology::nodes_with_role(NodeRole role) const {
  std::vector<NodeId> out;
  for (const auto& [id, info] : nodes_) {
    if (info.role == role) out.push_back(id);
  }
  return out;
}

std::optional<NodeId> Topology::base_station() const {
  for (const auto& [id, info] : nodes_) {
    if (info.role == NodeRole::BaseStation) return id;
  }
  return std::nullopt;
}

std::size_t Topology::edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const auto& kv) { return kv.second.parent.has_value(); }));
}

std::vector<NodeId> Topology::adjacent_peers(NodeId n) const {
  node(n);
  std::vector<NodeId> out;
  for (auto it = adjacency_.lower_bound({n, NodeId{0}});
       it != adjacency_.end() && it->first == n; ++it) {
    if (it->second != n) out.push_back(it->second);
  }
  return out;
}

bool Topology::adjacent(NodeId a, NodeId b) const {
  return adjacency_.count({a, b}) != 0;
}

bool Topology::is_tree_edge(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b)) return false;
  return node(a).parent == b || node(b).parent == a;
}

void Topology::reparent(NodeId child, NodeId new_parent) {
  auto& info = nodes_.at(child);
  node(new_parent);
  if (info.parent) {
    auto& old = children_[*info.parent];
    old.erase(std::remove(old.begin(), old.end(), child), old.end());
  }
  info.parent = new_parent;
  auto& siblings = children_[new_parent];
  siblings.insert(std::lower_bound(siblings.begin(), siblings.end(), child),
                  child);
}

Topology build_topology(const TopologySpec& spec) {
  if (spec.regions == 0 || spec.clusters_per_region == 0 ||
      spec.sensors_per_cluster == 0) {
    throw SpecError("topology counts must all be >= 1");
  }
  Topology t;
  std::uint32_t next = 0;
  const NodeId bs{next++};
  t.add_node(bs, NodeRole::BaseStation, std::nullopt, "BS");

  std::vector<NodeId> regions;
  for (std::size_t r = 0; r < spec.regions; ++r) {
    NodeId id{next++};
    t.add_node(id, NodeRole::RegionalNode, bs, "R" + std::to_string(r + 1));
    regions.push_back(id);
  }
  std::vector<NodeId> clusters;
  for (std::size_t r = 0; r < spec.regions; ++r) {
    for (std::size_t c = 0; c < spec.clusters_per_region; ++c) {
      NodeId id{next++};
      t.add_node(id, NodeRole::ClusterNode, regions[r],
                 "C" + std::to_string(r + 1) + "." + std::to_string(c + 1));
      clusters.push_back(id);
    }
  }
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::string& cl = t.label(clusters[i]);
    for (std::size_t s = 0; s < spec.sensors_per_cluster; ++s) {
      t.add_node(NodeId{next++}, NodeRole::Sensor, clusters[i],
                 "S" + cl.substr(1) + "." + std::to_string(s + 1));
    }
  }

  auto resolve = [&](const std::string& label, NodeRole want) {
    auto id = t.find(label);
    if (!id || t.role(*id) != want) {
      throw SpecError("adjacency references undeclared " +
                      std::string(to_string(want)) + " '" + label + "'");
    }
    return *id;
  };
  for (const auto& [a, b] : spec.region_adjacency) {
    t.add_adjacency(resolve(a, NodeRole::RegionalNode),
                    resolve(b, NodeRole::RegionalNode));
  }
  if (spec.cluster_adjacency) {
    for (const auto& [a, b] : *spec.cluster_adjacency) {
      t.add_adjacency(resolve(a, NodeRole::ClusterNode),
                      resolve(b, NodeRole::ClusterNode));
    }
  } else {
    for (NodeId r : regions) {
      auto kids = t.children_of(r);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        for (std::size_t j = i + 1; j < kids.size(); ++j) {
          t.add_adjacency(kids[i], kids[j]);
        }
      }
    }
  }
  return t;
}

std::optional<NodeId> parent_of(const Topology& t, NodeId n) {
  return t.parent_of(n);
}

std::set<NodeId> descendants_of(const Topology& t, NodeId n) {
  return t.descendants_of(n);
}

namespace {

std::optional<NodeRole> expected_parent_role(NodeRole role) {
  switch (role) {
    case NodeRole::BaseStation: return std::nullopt;
    case NodeRole::RegionalNode: return NodeRole::BaseStation;
    case NodeRole::ClusterNode: return NodeRole::RegionalNode;
    case NodeRole::Sensor: return NodeRole::ClusterNode;
  }
  return std::nullopt;
}

std::string parent_rule(NodeRole role) {
  switch (role) {
    case NodeRole::RegionalNode: return "regional parent must be base station";
    case NodeRole::ClusterNode: return "cluster parent must be regional";
    case NodeRole::Sensor: return "sensor parent must be cluster";
    case NodeRole::BaseStation: break;
  }
  return "base station has no parent";
}

}  // namespace

std::vector<Violation> validate(const Topology& t) {
  std::vector<Violation> out;
  auto stations = t.nodes_with_role(NodeRole::BaseStation);
  if (stations.size() != 1) {
    out.push_back({"exactly one base station", stations});
  }
  for (const auto& [id, info] : t.nodes()) {
    auto want = expected_parent_role(info.role);
    if (!want) {
      if (info.parent) out.push_back({parent_rule(info.role), {id}});
      continue;
    }
    if (!info.parent) {
      out.push_back({"missing parent", {id}});
    } else if (!t.contains(*info.parent)) {
      out.push_back({"unknown parent", {id, *info.parent}});
    } else if (t.role(*info.parent) != *want) {
      out.push_back({parent_rule(info.role), {id, *info.parent}});
    }
  }
  for (const auto& [a, b] : t.adjacency()) {
    if (a == b) {
      out.push_back({"irreflexive", {a}});
      continue;
    }
    if (!t.contains(a) || !t.contains(b)) {
      out.push_back({"adjacency references unknown node", {a, b}});
      continue;
    }
    if (!t.adjacent(b, a)) {
      out.push_back({"symmetric", {a, b}});
    } else if (a > b) {
      continue;  // mirrored pair, reported once
    }
    NodeRole ra = t.role(a);
    NodeRole rb = t.role(b);
    bool lateral = ra == rb && (ra == NodeRole::RegionalNode ||
                                ra == NodeRole::ClusterNode);
    if (!lateral) {
      out.push_back({"adjacency only between regional or cluster peers", {a, b}});
      continue;
    }
    if (ra == NodeRole::ClusterNode) {
      auto ha = t.home_of(a);
      auto hb = t.home_of(b);
      if (ha && hb && *ha != *hb && !t.adjacent(*ha, *hb)) {
        out.push_back({"cluster adjacency spans non-adjacent regions", {a, b}});
      }
    }
  }
  return out;
}

}  // namespace wsnids
