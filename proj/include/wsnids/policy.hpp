#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "wsnids/ida.hpp"
#include "wsnids/response.hpp"
#include "wsnids/topology.hpp"

namespace wsnids {

enum class AgentRole { BPDP, RPA, LPA };

/// Agent hosted by a node, if any. Sensors host none.
std::optional<AgentRole> agent_role(NodeRole role);

struct BanEntry {
  NodeId node;
  bool operator==(const BanEntry&) const = default;
};

using PolicyBody =
    std::variant<SignatureRecord, NormalProfile, ResponseParams, BanEntry>;

enum class ScopeKind { All, Region, Cluster };

struct Scope {
  ScopeKind kind = ScopeKind::All;
  NodeId target;  // region or cluster id; unused for All

  static Scope all() { return {}; }
  static Scope region(NodeId r) { return {ScopeKind::Region, r}; }
  static Scope cluster(NodeId c) { return {ScopeKind::Cluster, c}; }
  bool operator==(const Scope&) const = default;
};

std::string to_string(const Scope& s);
std::string_view policy_kind_name(const PolicyBody& body);

struct Policy {
  std::uint64_t version = 0;
  PolicyBody body;
  Scope scope;

  bool operator==(const Policy&) const = default;
};

enum class ApplyResult { Applied, StaleVersion };

/// Version-ordered policy store held by every agent (the PIB).
class PolicyRepository {
 public:
  PolicyRepository() = default;
  explicit PolicyRepository(NodeId owner) : owner_(owner) {}

  /// Appends p when p.version exceeds the high-water mark.
  ApplyResult apply(const Policy& p);

  NodeId owner() const { return owner_; }
  const std::vector<Policy>& entries() const { return entries_; }
  std::uint64_t high_water() const { return high_water_; }
  bool empty() const { return entries_.empty(); }
  std::set<std::uint64_t> versions() const;
  bool holds_ban(NodeId node) const;

  /// Replace contents wholesale; entries are sorted and high_water reset.
  void assign(std::vector<Policy> entries);

 private:
  NodeId owner_;
  std::vector<Policy> entries_;
  std::uint64_t high_water_ = 0;
};

using RepositorySnapshot = std::vector<Policy>;

RepositorySnapshot snapshot(const PolicyRepository& repo);

/// Sets target to exactly the snapshot entries accepted by `in_scope`.
void restore(PolicyRepository& target, const RepositorySnapshot& snap,
             const std::function<bool(const Policy&)>& in_scope);

/// What an agent currently enforces, derived from its repository.
struct EffectivePolicy {
  std::vector<SignatureRecord> signatures;  // version order
  std::optional<NormalProfile> profile;
  ResponseParams response;
  std::set<NodeId> bans;

  void apply(const Policy& p);
  static EffectivePolicy rebuild(const PolicyRepository& repo,
                                 ResponseParams defaults);
};

/// Which agent currently controls each region/cluster domain. A domain is
/// initially controlled by the node of the same id; takeover hands every
/// domain of the failed node to its successor.
class DomainMap {
 public:
  NodeId controller(NodeId domain) const;
  void hand_over(NodeId failed, NodeId successor);
  /// Domains controlled by `agent`, ascending, including its own id.
  std::vector<NodeId> domains_of(NodeId agent) const;

 private:
  std::map<NodeId, NodeId> handed_to_;
};

/// True when the policy's scope reaches `agent` under the current topology
/// and domain control. BPDP is always in scope.
bool in_scope(const Scope& scope, NodeId agent, const Topology& t,
              const DomainMap& domains);

/// The base station's policy decision point; the authoritative store.
class Bpdp {
 public:
  explicit Bpdp(NodeId id) : repo_(id) {}

  Policy issue(PolicyBody body, Scope scope);
  NodeId id() const { return repo_.owner(); }
  const PolicyRepository& repository() const { return repo_; }

 private:
  PolicyRepository repo_;
};

/// One planned delivery: the RPA hop and the LPA hops behind it.
struct DisseminationHop {
  NodeId rpa;
  bool rpa_applies = false;
  std::vector<NodeId> lpas;
};

/// Routes a policy down the tree: every live RPA that is in scope or has an
/// in-scope live LPA child. Failed nodes are skipped here; messages already
/// in flight to a node that dies are dropped at delivery.
std::vector<DisseminationHop> plan_dissemination(
    const Policy& p, const Topology& t, const DomainMap& domains,
    const std::function<bool(NodeId)>& live);

}  // namespace wsnids
