#include "doctest.h"
#include "wsnids/error.hpp"
#include "wsnids/survivability.hpp"

using namespace wsnids;

namespace {

Topology two_by_two() {
  TopologySpec s;
  s.regions = 2;
  s.clusters_per_region = 2;
  s.sensors_per_cluster = 2;
  s.region_adjacency = {{"R1", "R2"}};
  return build_topology(s);
}

HeartbeatState fresh_beats(const Topology& t, Tick at) {
  HeartbeatState hb;
  hb.timeout = 30;
  for (auto role : {NodeRole::RegionalNode, NodeRole::ClusterNode}) {
    for (NodeId n : t.nodes_with_role(role)) hb.record(n, at);
  }
  return hb;
}

auto all_live = [](NodeId) { return true; };

}  // namespace

TEST_CASE("no failures while heartbeats are fresh") {
  Topology t = two_by_two();
  CHECK(detect_failure(t, fresh_beats(t, 100), 120, {}).empty());
  CHECK(detect_failure(t, fresh_beats(t, 100), 130, {}).empty());
}

TEST_CASE("silent regional node is reported after the timeout") {
  Topology t = two_by_two();
  HeartbeatState hb = fresh_beats(t, 200);
  const NodeId r1 = *t.find("R1");
  hb.record(r1, 100);
  CHECK(detect_failure(t, hb, 130, {}).empty());
  CHECK(detect_failure(t, hb, 131, {}) == std::vector<NodeId>{r1});
}

TEST_CASE("dead region and dead cluster are found in two rounds") {
  Topology t = two_by_two();
  DomainMap d;
  HeartbeatState hb = fresh_beats(t, 200);
  const NodeId r1 = *t.find("R1"), r2 = *t.find("R2"), c12 = *t.find("C1.2");
  hb.record(r1, 100);
  hb.record(c12, 100);
  hb.record(*t.find("C1.1"), 125);
  auto first = detect_failure(t, hb, 131, {});
  CHECK(first == std::vector<NodeId>{r1});
  transfer_control(t, d, r1, select_successor(t, r1, [&](NodeId n) { return n != r1; }), 131);
  hb.record(*t.find("C1.1"), 140);
  auto second = detect_failure(t, hb, 141, {r1});
  CHECK(second == std::vector<NodeId>{c12});
  CHECK(t.parent_of(c12) == r2);
}

TEST_CASE("base station is never reported") {
  Topology t = two_by_two();
  HeartbeatState hb;
  for (NodeId n : detect_failure(t, hb, 1000, {})) CHECK(n != NodeId{0});
}

TEST_CASE("successor selection") {
  SUBCASE("sole candidate") {
    Topology t = two_by_two();
    CHECK(select_successor(t, *t.find("R1"), all_live) == *t.find("R2"));
  }
  SUBCASE("load rule and tie-break") {
    Topology t;
    t.add_node(NodeId{0}, NodeRole::BaseStation, std::nullopt, "BS");
    for (std::uint32_t r : {1u, 5u, 9u}) t.add_node(NodeId{r}, NodeRole::RegionalNode, NodeId{0});
    std::uint32_t next = 20;
    auto clusters = [&](std::uint32_t r, int k) {
      for (int i = 0; i < k; ++i) t.add_node(NodeId{next++}, NodeRole::ClusterNode, NodeId{r});
    };
    clusters(1, 1);
    clusters(5, 3);
    clusters(9, 2);
    t.add_adjacency(NodeId{1}, NodeId{5});
    t.add_adjacency(NodeId{1}, NodeId{9});
    CHECK(select_successor(t, NodeId{1}, all_live) == NodeId{9});
    t.add_node(NodeId{next++}, NodeRole::ClusterNode, NodeId{9});
    CHECK(select_successor(t, NodeId{1}, all_live) == NodeId{5});
    CHECK(select_successor(t, NodeId{1}, [](NodeId n) { return n != NodeId{5}; }) == NodeId{9});
  }
  SUBCASE("no live peer") {
    Topology t = two_by_two();
    CHECK_THROWS_AS(select_successor(t, *t.find("R1"), [](NodeId) { return false; }),
                    NoSuccessor);
  }
}

TEST_CASE("transfer reparents children and keeps the tree valid") {
  SUBCASE("regional") {
    Topology t = two_by_two();
    DomainMap d;
    const NodeId r1 = *t.find("R1"), r2 = *t.find("R2");
    auto sensors_before = descendants_of(t, *t.find("C1.1"));
    auto rec = transfer_control(t, d, r1, r2, 50);
    CHECK(rec.transferred == std::vector<NodeId>{*t.find("C1.1"), *t.find("C1.2")});
    for (NodeId c : rec.transferred) CHECK(t.parent_of(c) == r2);
    CHECK(descendants_of(t, *t.find("C1.1")) == sensors_before);
    CHECK(d.controller(r1) == r2);
    CHECK(validate(t).empty());
  }
  SUBCASE("cluster") {
    Topology t = two_by_two();
    DomainMap d;
    const NodeId c11 = *t.find("C1.1"), c12 = *t.find("C1.2");
    auto orphans = t.children_of(c11);
    const NodeId succ = select_successor(t, c11, all_live);
    CHECK(succ == c12);
    transfer_control(t, d, c11, succ, 50);
    for (NodeId s : orphans) CHECK(t.parent_of(s) == c12);
    CHECK(t.children_of(c12).size() == 4);
    CHECK(validate(t).empty());
  }
}
