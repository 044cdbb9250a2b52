#include "wsnids/policy.hpp"

#include <algorithm>

namespace wsnids {

std::optional<AgentRole> agent_role(NodeRole role) {
  switch (role) {
    case NodeRole::BaseStation: return AgentRole::BPDP;
    case NodeRole::RegionalNode: return AgentRole::RPA;
    case NodeRole::ClusterNode: return AgentRole::LPA;
    case NodeRole::Sensor: return std::nullopt;
  }
  return std::nullopt;
}

std::string to_string(const Scope& s) {
  switch (s.kind) {
    case ScopeKind::All: return "all";
    case ScopeKind::Region: return "region:" + to_string(s.target);
    case ScopeKind::Cluster: return "cluster:" + to_string(s.target);
  }
  return "?";
}

std::string_view policy_kind_name(const PolicyBody& body) {
  switch (body.index()) {
    case 0: return "signature";
    case 1: return "profile";
    case 2: return "response";
    case 3: return "ban";
  }
  return "?";
}

ApplyResult PolicyRepository::apply(const Policy& p) {
  if (p.version <= high_water_) return ApplyResult::StaleVersion;
  entries_.push_back(p);
  high_water_ = p.version;
  return ApplyResult::Applied;
}

std::set<std::uint64_t> PolicyRepository::versions() const {
  std::set<std::uint64_t> out;
  for (const auto& p : entries_) out.insert(p.version);
  return out;
}

bool PolicyRepository::holds_ban(NodeId node) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Policy& p) {
    const auto* b = std::get_if<BanEntry>(&p.body);
    return b && b->node == node;
  });
}

void PolicyRepository::assign(std::vector<Policy> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Policy& a, const Policy& b) { return a.version < b.version; });
  entries_ = std::move(entries);
  high_water_ = entries_.empty() ? 0 : entries_.back().version;
}

RepositorySnapshot snapshot(const PolicyRepository& repo) {
  return repo.entries();
}

void restore(PolicyRepository& target, const RepositorySnapshot& snap,
             const std::function<bool(const Policy&)>& in_scope) {
  std::vector<Policy> kept;
  std::copy_if(snap.begin(), snap.end(), std::back_inserter(kept), in_scope);
  target.assign(std::move(kept));
}

void EffectivePolicy::apply(const Policy& p) {
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, SignatureRecord>) {
          signatures.push_back(body);
        } else if constexpr (std::is_same_v<T, NormalProfile>) {
          profile = body;
        } else if constexpr (std::is_same_v<T, ResponseParams>) {
          response = body;
        } else {
          bans.insert(body.node);
        }
      },
      p.body);
}

EffectivePolicy EffectivePolicy::rebuild(const PolicyRepository& repo,
                                         ResponseParams defaults) {
  EffectivePolicy e;
  e.response = defaults;
  for (const auto& p : repo.entries()) e.apply(p);
  return e;
}

NodeId DomainMap::controller(NodeId domain) const {
  NodeId cur = domain;
  for (auto it = handed_to_.find(cur); it != handed_to_.end();
       it = handed_to_.find(cur)) {
    cur = it->second;
  }
  return cur;
}

void DomainMap::hand_over(NodeId failed, NodeId successor) {
  handed_to_[failed] = successor;
}

std::vector<NodeId> DomainMap::domains_of(NodeId agent) const {
  std::vector<NodeId> out{agent};
  for (const auto& [domain, _] : handed_to_) {
    if (domain != agent && controller(domain) == agent) out.push_back(domain);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool in_scope(const Scope& scope, NodeId agent, const Topology& t,
              const DomainMap& domains) {
  const NodeRole role = t.role(agent);
  if (role == NodeRole::BaseStation) return true;
  if (role == NodeRole::Sensor) return false;
  switch (scope.kind) {
    case ScopeKind::All:
      return true;
    case ScopeKind::Region: {
      if (role == NodeRole::RegionalNode) {
        return domains.controller(scope.target) == agent;
      }
      for (NodeId c : domains.domains_of(agent)) {
        if (t.home_of(c) == scope.target) return true;
      }
      return false;
    }
    case ScopeKind::Cluster: {
      NodeId lpa = domains.controller(scope.target);
      if (role == NodeRole::ClusterNode) return lpa == agent;
      return t.contains(lpa) && t.parent_of(lpa) == agent;
    }
  }
  return false;
}

Policy Bpdp::issue(PolicyBody body, Scope scope) {
  Policy p{repo_.high_water() + 1, std::move(body), scope};
  repo_.apply(p);
  return p;
}

std::vector<DisseminationHop> plan_dissemination(
    const Policy& p, const Topology& t, const DomainMap& domains,
    const std::function<bool(NodeId)>& live) {
  std::vector<DisseminationHop> out;
  for (NodeId rpa : t.nodes_with_role(NodeRole::RegionalNode)) {
    if (!live(rpa)) continue;
    DisseminationHop hop{rpa, in_scope(p.scope, rpa, t, domains), {}};
    for (NodeId lpa : t.children_of(rpa)) {
      if (live(lpa) && in_scope(p.scope, lpa, t, domains)) {
        hop.lpas.push_back(lpa);
      }
    }
    if (hop.rpa_applies || !hop.lpas.empty()) out.push_back(std::move(hop));
  }
  return out;
}

}  // namespace wsnids
