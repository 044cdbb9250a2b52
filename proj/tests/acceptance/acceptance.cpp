// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/response_oracle.hpp"
#include "wsnids/replay.hpp"
#include "wsnids/run.hpp"
#include "wsnids/scenario.hpp"
#include "wsnids/simulation.hpp"

using namespace wsnids;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Records the first failed expectation; later ones are ignored.
class Expect {
 public:
  void that(bool cond, const std::string& what) {
    if (!cond && out_.ok) {
      out_.ok = false;
      out_.detail = what;
    }
  }
  Outcome done(const std::string& summary) {
    if (out_.ok) out_.detail = summary;
    return out_;
  }

 private:
  Outcome out_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<const LogRecord*> of_kind(const EventLog& log, const std::string& kind) {
  std::vector<const LogRecord*> out;
  for (const auto& r : log.records()) {
    if (r.kind == kind) out.push_back(&r);
  }
  return out;
}

std::string scenario_path(const char* name) {
  return std::string(WSNIDS_SCENARIO_DIR) + "/" + name;
}

const char* kProfile =
    "policy at=0 kind=profile k=3 pkt_rate=2:0.45 drop_ratio=0:0.05 fwd_ratio=1:0.05 "
    "dup_count=0:0.5\n";

// ---- 1 ----------------------------------------------------------------------

Outcome state_machine_oracle() {
  Expect e;
  const auto t0 = Clock::now();
  const ResponseParams p = ResponseParams::for_window(10);
  const NodeId n{7};
  const Tick now = 100000;
  std::size_t tuples = 0;
  for (NodeClass c : kAllClasses) {
    for (bool bad : {false, true}) {
      for (int timer = 0; timer <= (c == NodeClass::Suspect ? 2 : 1); ++timer) {
        for (std::uint32_t osc = 0; osc <= p.oscillation_limit; ++osc) {
          oracle::Tuple tup{c, bad, timer, osc};
          auto want = oracle::expected(tup, p.oscillation_limit);
          auto got = transition(oracle::realize(tup, n, now, p),
                                {n, now, bad ? Verdict::Misbehaving : Verdict::Good}, now, p);
          std::set<Action> acts(got.actions.begin(), got.actions.end());
          e.that(got.state.cls == want.cls && acts == want.actions,
                 "tuple disagrees: class " + std::string(to_string(c)) + " verdict " +
                     (bad ? "bad" : "good") + " timer " + std::to_string(timer) + " osc " +
                     std::to_string(osc));
          ++tuples;
        }
      }
    }
  }

  ResponseParams small;
  small.probation_ticks = 3;
  small.unstable_ticks = 2;
  small.oscillation_limit = 3;
  small.oscillation_window = 20;
  small.misbehave_limit_ticks = 3;
  small.ban_ticks = 4;
  small.reobserve_ticks = 2;
  std::mt19937_64 rng(2024);
  std::set<NodeClass> reached;
  constexpr int kSequences = 10000;
  for (int seq = 0; seq < kSequences; ++seq) {
    const double rate = std::uniform_real_distribution<double>(0.02, 0.7)(rng);
    std::bernoulli_distribution draw(rate);
    NodeClassState s = NodeClassState::fresh(n, 0);
    oracle::Machine m(small, 0);
    int reds = 0;
    for (Tick t = 1; t <= 100; ++t) {
      const bool bad = draw(rng);
      auto r = transition(s, {n, t, bad ? Verdict::Misbehaving : Verdict::Good}, t, small);
      for (Action a : r.actions) reds += a == Action::EmitRedAlert;
      s = std::move(r.state);
      m.observe(bad, t);
      reached.insert(s.cls);
      if (s.cls != m.cls()) {
        e.that(false, "trajectory diverges in sequence " + std::to_string(seq) + " at tick " +
                          std::to_string(t));
        break;
      }
    }
    e.that(reds == m.red_alerts(), "red alert count diverges in sequence " + std::to_string(seq));
  }
  e.that(reached.size() == kAllClasses.size(), "random sequences did not reach every class");
  const double secs = seconds_since(t0);
  e.that(secs < 5.0, "took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu tuples and %d sequences agree in %.2f s", tuples,
                kSequences, secs);
  return e.done(buf);
}

// ---- 2 ----------------------------------------------------------------------

struct AttackTiming {
  std::optional<Tick> alert;
  std::string kind;
  std::string role;
  NodeId origin;
  std::optional<Tick> bpdp;
};

AttackTiming first_detection(const EventLog& log, NodeId attacker, Tick injected) {
  AttackTiming out;
  for (const auto& r : log.records()) {
    if (r.subject != attacker || r.tick < injected) continue;
    if (r.kind == "Alert" && !out.alert) {
      out.alert = r.tick;
      out.kind = r.str("alert");
      out.role = r.str("role");
      out.origin = NodeId{static_cast<std::uint32_t>(r.u64("origin"))};
    }
    if (r.kind == "AlertRecv" && out.alert && !out.bpdp && r.u64("raised") == *out.alert &&
        r.str("alert") == out.kind) {
      out.bpdp = r.tick;
    }
  }
  return out;
}

Outcome misuse_latency() {
  Expect e;
  Scenario s = load_scenario(scenario_path("signature_attack.scn"));
  e.that(s.window == 10 && s.hop_latency == 1, "scenario must use W=10 and latency 1");
  e.that(s.attacks.size() == 1 && s.attacks[0].start == 50, "attack must start at 50");
  RunResult r = run_scenario(s, RngSeed{1});
  auto d = first_detection(r.log, s.attacks[0].attacker, 50);
  e.that(d.alert.has_value(), "no alert for the attacker");
  e.that(d.kind == "Misuse" && d.role == "LPA", "first alert is " + d.role + " " + d.kind);
  e.that(d.alert && *d.alert <= 60, "LPA alert at " + std::to_string(d.alert.value_or(0)));
  e.that(d.bpdp && *d.bpdp <= 62, "BPDP receipt at " + std::to_string(d.bpdp.value_or(0)));
  return e.done("Misuse alert at LPA tick " + std::to_string(*d.alert) + ", at BPDP tick " +
                std::to_string(*d.bpdp));
}

// ---- 3 ----------------------------------------------------------------------

Outcome isolation_soundness() {
  Expect e;
  Scenario s = parse_scenario_text(std::string(R"(
[topology]
regions = 2
clusters_per_region = 2
sensors_per_cluster = 4
region_adjacency = R1-R2
[policies]
)") + kProfile + R"(policy at=0 kind=signature id=s7 tag=s7
[attacks]
attack node=S2.1.3 kind=signature sig=s7 start=25 stop=5000
[run]
length = 5000
)");
  Simulation sim(s, RngSeed{8});
  sim.run();
  const NodeId m = s.attacks[0].attacker;

  std::vector<std::string> path;
  std::optional<Tick> malicious_at;
  std::size_t forwarded_in_quarantine = 0;
  std::size_t forwarded_after_ban = 0;
  std::optional<Tick> quarantine_until;
  for (const auto& r : sim.log().records()) {
    if (r.subject != m) continue;
    if (r.kind == "ClassChange") {
      path.push_back(r.str("to"));
      if (r.str("to") == "Suspect") quarantine_until = r.u64("banned_until");
      else quarantine_until.reset();
      if (r.str("to") == "Malicious") malicious_at = r.tick;
    } else if (r.kind == "Forward") {
      if (malicious_at) ++forwarded_after_ban;
      else if (quarantine_until && r.tick < *quarantine_until) ++forwarded_in_quarantine;
    }
  }
  e.that(path.size() >= 2 && path[0] == "Suspect" && path.back() == "Malicious",
         "attacker did not go Fresh -> Suspect -> Malicious");
  e.that(forwarded_in_quarantine == 0,
         std::to_string(forwarded_in_quarantine) + " packets forwarded during quarantine");
  e.that(forwarded_after_ban == 0,
         std::to_string(forwarded_after_ban) + " packets forwarded after the ban");

  // The ban travels LPA -> RPA -> BPDP and back down: 4 hops for a 2-level
  // agent tree.
  const Tick bound = malicious_at.value_or(0) + 4 * s.hop_latency;
  std::map<NodeId, Tick> ban_at;
  for (const auto* r : of_kind(sim.log(), "PolicyApplied")) {
    if (r->str("kind") == "ban") ban_at.emplace(r->subject, r->tick);
  }
  for (const auto* r : of_kind(sim.log(), "PolicyIssued")) {
    if (r->str("kind") == "ban" && r->u64("node") == m.value) ban_at.emplace(r->subject, r->tick);
  }
  std::size_t agents = 0;
  for (const auto& [id, node] : sim.topology().nodes()) {
    if (node.role == NodeRole::Sensor || !sim.live(id)) continue;
    ++agents;
    const auto& repo = id == sim.bpdp().id() ? sim.bpdp().repository() : sim.repository(id);
    e.that(repo.holds_ban(m), "agent " + to_string(id) + " lacks the ban");
    auto it = ban_at.find(id);
    e.that(it != ban_at.end() && it->second <= bound,
           "agent " + to_string(id) + " got the ban after tick " + std::to_string(bound));
  }
  RunReport rep = build_report(sim.log());
  e.that(rep.isolation_violations == 0, "report counts isolation violations");
  return e.done("Malicious at " + std::to_string(malicious_at.value_or(0)) +
                ", 0 packets forwarded while isolated, ban at " + std::to_string(agents) +
                " agents by tick " + std::to_string(bound));
}

// ---- 4 ----------------------------------------------------------------------

std::string random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int regions = pick(1, 3), clusters = pick(1, 3), sensors = pick(2, 4);
  const int length = 100 * pick(4, 8);
  std::ostringstream o;
  o << "[topology]\nregions = " << regions << "\nclusters_per_region = " << clusters
    << "\nsensors_per_cluster = " << sensors << "\n";
  if (regions > 1) {
    o << "region_adjacency = ";
    for (int r = 1; r < regions; ++r) o << (r > 1 ? "," : "") << "R" << r << "-R" << r + 1;
    o << "\n";
  }
  o << "[policies]\n";
  const double sd = 0.3 + 0.05 * pick(0, 4);  // tighter profiles raise false positives
  o << "policy at=0 kind=profile k=3 pkt_rate=2:" << sd
    << " drop_ratio=0:0.05 fwd_ratio=1:0.05 dup_count=0:0.5\n";
  o << "policy at=0 kind=signature id=s7 tag=s7\n";
  if (pick(0, 1)) o << "policy at=" << pick(1, 50) << " kind=response probation=40 ban=60 reobserve=30\n";
  o << "[attacks]\n";
  std::set<std::string> used;
  const char* kinds[] = {"signature", "flood", "drop", "replay"};
  for (int i = pick(0, 3); i > 0; --i) {
    std::string node = "S" + std::to_string(pick(1, regions)) + "." +
                       std::to_string(pick(1, clusters)) + "." + std::to_string(pick(1, sensors));
    if (!used.insert(node).second) continue;
    const int start = pick(0, length / 2);
    const int stop = pick(start + 1, length);
    const char* kind = kinds[pick(0, 3)];
    o << "attack node=" << node << " kind=" << kind << " start=" << start << " stop=" << stop;
    if (std::string(kind) == "signature") o << " sig=s7";
    if (std::string(kind) == "flood") o << " multiplier=" << pick(2, 6);
    if (std::string(kind) == "drop") o << " rate=0." << pick(3, 9);
    o << "\n";
  }
  if (pick(0, 2) == 0) {
    o << "[failures]\n";
    if (regions > 1 && pick(0, 1)) {
      o << "fail node=R" << pick(1, regions) << " at=" << pick(50, length - 50) << "\n";
    } else {
      o << "fail node=C" << pick(1, regions) << "." << pick(1, clusters) << " at="
        << pick(50, length - 50) << "\n";
    }
  }
  o << "[run]\nlength = " << length << "\n";
  return o.str();
}

Outcome red_alert_completeness() {
  Expect e;
  std::uint64_t suspects = 0, nodes_checked = 0;
  for (std::uint64_t i = 1; i <= 100; ++i) {
    Scenario s = parse_scenario_text(random_scenario(i));
    RunResult r = run_scenario(s, RngSeed{i});
    std::map<NodeId, std::pair<std::uint64_t, std::uint64_t>> per_node;
    for (const auto& rec : r.log.records()) {
      if (rec.kind == "ClassChange" && rec.str("to") == "Suspect") ++per_node[rec.subject].first;
      if (rec.kind == "RedAlert") ++per_node[rec.subject].second;
    }
    for (const auto& [node, counts] : per_node) {
      e.that(counts.first == counts.second,
             "scenario " + std::to_string(i) + " node " + to_string(node) + ": " +
                 std::to_string(counts.first) + " Suspect entries vs " +
                 std::to_string(counts.second) + " red alerts");
      suspects += counts.first;
      ++nodes_checked;
    }
  }
  e.that(suspects > 0, "no Suspect entries at all; the check is vacuous");
  return e.done(std::to_string(suspects) + " Suspect entries over " +
                std::to_string(nodes_checked) + " nodes in 100 scenarios, all matched");
}

// ---- 5 ----------------------------------------------------------------------

Outcome failover_continuity() {
  Expect e;
  Scenario s = load_scenario(scenario_path("failover.scn"));
  e.that(s.failures.size() == 1, "scenario must kill exactly one node");
  const FailureSpec kill = s.failures.at(0);
  e.that(s.topology.role(kill.node) == NodeRole::RegionalNode, "killed node must be regional");
  const AttackSpec attack = s.attacks.at(0);

  Simulation sim(s, RngSeed{3});
  sim.run();
  auto takeovers = of_kind(sim.log(), "Takeover");
  e.that(takeovers.size() == 1, "expected one Takeover record");
  if (takeovers.empty()) return e.done("");
  const LogRecord& tk = *takeovers[0];
  const Tick waited = tk.tick - kill.at;
  e.that(tk.subject == kill.node, "takeover of the wrong node");
  e.that(waited <= s.effective_timeout(),
         "takeover " + std::to_string(waited) + " ticks after the failure");
  e.that(validate(sim.topology()).empty(), "topology has violations after takeover");

  const NodeId cluster = *s.topology.parent_of(attack.attacker);
  const auto& moved = sim.takeovers().at(0).transferred;
  e.that(std::find(moved.begin(), moved.end(), cluster) != moved.end(),
         "attack is not in a transferred cluster");
  e.that(attack.start > tk.tick, "attack must start after the takeover");

  auto after = first_detection(sim.log(), attack.attacker, attack.start);
  e.that(after.alert && after.bpdp, "post-takeover attack not detected");
  if (!after.alert || !after.bpdp) return e.done("");
  const Tick latency = *after.alert - attack.start;
  e.that(after.kind == "Misuse", "post-takeover alert is " + after.kind);
  e.that(latency <= s.window, "latency " + std::to_string(latency));
  e.that(*after.bpdp - *after.alert == 2 * s.hop_latency, "BPDP receipt not two hops later");
  e.that(sim.topology().parent_of(after.origin) == sim.takeovers()[0].successor,
         "alert did not come through the successor");

  // Same scenario without the failure: the attack must look the same.
  Scenario intact = s;
  intact.failures.clear();
  Simulation ref(intact, RngSeed{3});
  ref.run();
  auto before = first_detection(ref.log(), attack.attacker, attack.start);
  e.that(before.alert == after.alert && before.kind == after.kind && before.bpdp == after.bpdp,
         "detection differs from the failure-free run");
  return e.done("takeover " + std::to_string(waited) + " ticks after failure (timeout " +
                std::to_string(s.effective_timeout()) + "), " + after.kind + " latency " +
                std::to_string(latency) + ", BPDP +" + std::to_string(*after.bpdp - *after.alert) +
                ", same as the failure-free run");
}

// ---- 6 ----------------------------------------------------------------------

bool strictly_increasing_subsequence(const std::vector<Policy>& sub,
                                     const std::vector<Policy>& issue_order) {
  std::size_t j = 0;
  std::uint64_t last = 0;
  for (const Policy& p : sub) {
    if (p.version <= last) return false;
    last = p.version;
    while (j < issue_order.size() && issue_order[j].version != p.version) ++j;
    if (j == issue_order.size() || !(issue_order[j] == p)) return false;
    ++j;
  }
  return true;
}

Outcome policy_consistency() {
  Expect e;
  // No failures: every agent holds every scope-All policy.
  {
    Scenario s = load_scenario(scenario_path("signature_attack.scn"));
    Simulation sim(s, RngSeed{1});
    sim.run_until(50);
    Policy extra = sim.issue_policy(SignatureRecord{"late", {"late", {}}, {}}, Scope::all());
    sim.run_until(60);
    for (const auto& [id, node] : sim.topology().nodes()) {
      if (node.role != NodeRole::RegionalNode && node.role != NodeRole::ClusterNode) continue;
      const auto v = sim.repository(id).versions();
      for (const Policy& p : sim.bpdp().repository().entries()) {
        if (p.scope.kind == ScopeKind::All) {
          e.that(v.count(p.version), "agent " + to_string(id) + " lacks version " +
                                          std::to_string(p.version));
        }
      }
      e.that(v.count(extra.version), "agent " + to_string(id) + " lacks the late policy");
    }
  }

  // Mixed scopes around a regional failure.
  Scenario s = parse_scenario_text(std::string(R"(
[topology]
regions = 3
clusters_per_region = 2
sensors_per_cluster = 2
region_adjacency = R1-R2,R2-R3
[policies]
)") + kProfile + R"(policy at=0 kind=signature id=a tag=a
policy at=3 kind=signature id=r1 tag=r1 scope=region:R1
policy at=4 kind=signature id=r2 tag=r2 scope=region:R2
policy at=5 kind=signature id=r3 tag=r3 scope=region:R3
policy at=6 kind=signature id=c11 tag=c11 scope=cluster:C1.1
policy at=7 kind=signature id=c31 tag=c31 scope=cluster:C3.1
policy at=8 kind=response probation=50 scope=cluster:C2.2
policy at=300 kind=signature id=late1 tag=late1 scope=region:R1
policy at=301 kind=signature id=late3 tag=late3 scope=cluster:C3.2
policy at=302 kind=signature id=lateall tag=lateall
[failures]
fail node=R1 at=150
[run]
length = 400
)");
  Simulation sim(s, RngSeed{4});
  sim.run();
  const auto& issued = sim.bpdp().repository().entries();
  const Topology& home = s.topology;  // pre-failure layout: scopes name home domains
  e.that(sim.takeovers().size() == 1, "expected one takeover");
  for (const auto& [id, node] : sim.topology().nodes()) {
    if (node.role != NodeRole::RegionalNode && node.role != NodeRole::ClusterNode) continue;
    if (!sim.live(id)) continue;
    const auto& repo = sim.repository(id);
    e.that(strictly_increasing_subsequence(repo.entries(), issued),
           "agent " + to_string(id) + " versions are not a subsequence of issue order");
    // Independent scope filter: an RPA answers for the regions it controls,
    // an LPA for its own cluster and the region that cluster was built in.
    std::set<NodeId> regions, clusters;
    if (node.role == NodeRole::RegionalNode) {
      regions.insert(id);
      for (const auto& t : sim.takeovers()) {
        if (t.successor == id) regions.insert(t.failed);
      }
      for (NodeId c : sim.topology().children_of(id)) clusters.insert(c);
    } else {
      clusters.insert(id);
      regions.insert(*home.parent_of(id));
    }
    std::set<std::uint64_t> want;
    for (const Policy& p : issued) {
      bool reach = p.scope.kind == ScopeKind::All ||
                   (p.scope.kind == ScopeKind::Region && regions.count(p.scope.target)) ||
                   (p.scope.kind == ScopeKind::Cluster && clusters.count(p.scope.target));
      if (reach) want.insert(p.version);
    }
    e.that(repo.versions() == want,
           "agent " + to_string(id) + " repository differs from the BPDP scope filter");
  }
  return e.done("scope-All reaches every agent; " + std::to_string(issued.size()) +
                " issued policies, every repository is an ordered subsequence and equals "
                "the BPDP set filtered to its scope after takeover");
}

// ---- 7 ----------------------------------------------------------------------

Outcome leaf_sensor_ops() {
  Expect e;
  std::size_t sensors = 0, runs = 0;
  auto check = [&](const Scenario& s, std::uint64_t seed) {
    RunResult r = run_scenario(s, RngSeed{seed});
    ++runs;
    for (const auto* rec : of_kind(r.log, "Ops")) {
      if (rec->str("role") != "Sensor") continue;
      ++sensors;
      e.that(rec->u64("total") == 0, "sensor " + to_string(rec->subject) + " did " +
                                          rec->str("total") + " IDS operations");
    }
  };
  for (const char* f : {"minimal.scn", "signature_attack.scn", "failover.scn", "flood.scn"}) {
    check(load_scenario(scenario_path(f)), 1);
  }
  for (std::uint64_t i = 1; i <= 20; ++i) check(parse_scenario_text(random_scenario(i)), i);
  e.that(sensors > 0, "no sensor Ops records");
  return e.done(std::to_string(sensors) + " sensor counters over " + std::to_string(runs) +
                " runs, all 0");
}

// ---- 8 ----------------------------------------------------------------------

Outcome false_positive_rate() {
  Expect e;
  const auto t0 = Clock::now();
  Scenario normal = load_scenario(scenario_path("flood.scn"));
  normal.attacks.clear();
  const RngSeed seed{1};
  RunResult r = run_scenario(normal, seed);

  std::uint64_t windows = 0, flagged = 0;
  for (const auto* rec : of_kind(r.log, "Observation")) {
    ++windows;
    if (rec->str("finding") != "none") ++flagged;
  }
  const double measured = windows ? static_cast<double>(flagged) / static_cast<double>(windows) : 0;

  NormalProfile profile;
  for (const auto& sp : normal.policies) {
    if (auto* p = std::get_if<NormalProfile>(&sp.body)) profile = *p;
  }
  ReplayPlan plan;
  plan.seed = seed;
  plan.ticks = normal.run_length - normal.run_length % normal.window;
  plan.window = normal.window;
  for (NodeId n : normal.topology.nodes_with_role(NodeRole::Sensor)) {
    plan.sensors.push_back(n);
    plan.means.push_back(normal.traffic.mean_for(n));
  }
  auto pred = predict_false_positives(replay_window_counts_parallel(plan), plan, profile);
  const double diff_pp = std::fabs(measured - pred.rate()) * 100.0;
  e.that(windows >= 10000, "only " + std::to_string(windows) + " windows");
  e.that(diff_pp <= 0.5, "measured and predicted differ by " + std::to_string(diff_pp) + " pp");

  Scenario flood = load_scenario(scenario_path("flood.scn"));
  const AttackSpec& a = flood.attacks.at(0);
  e.that(a.kind == AttackKind::Flood && a.multiplier == 5, "flood scenario must be x5");
  RunResult fr = run_scenario(flood, seed);
  std::uint64_t active = 0, caught = 0;
  for (const auto* rec : of_kind(fr.log, "Observation")) {
    if (rec->subject != a.attacker) continue;
    if (rec->tick < a.start + flood.window || rec->tick > a.stop) continue;
    ++active;
    if (rec->str("finding").rfind("anomaly:", 0) == 0) ++caught;
  }
  e.that(active > 0 && caught == active,
         "flood flagged in " + std::to_string(caught) + " of " + std::to_string(active) +
             " windows");
  const double secs = seconds_since(t0);
  e.that(secs < 30.0, "took " + std::to_string(secs) + " s");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "measured %.4f%% vs replay %.4f%% over %llu windows (diff %.4f pp); "
                "flood flagged %llu/%llu; %.2f s",
                measured * 100, pred.rate() * 100, static_cast<unsigned long long>(windows),
                diff_pp, static_cast<unsigned long long>(caught),
                static_cast<unsigned long long>(active), secs);
  return e.done(buf);
}

// ---- 9 ----------------------------------------------------------------------

Outcome determinism() {
  Expect e;
  std::size_t pairs = 0;
  auto twice = [&](const Scenario& s, std::uint64_t seed, const std::string& name) {
    RunResult a = run_scenario(s, RngSeed{seed});
    RunResult b = run_scenario(s, RngSeed{seed});
    e.that(a.log.hash() == b.log.hash() && a.log.to_string() == b.log.to_string(),
           name + " seed " + std::to_string(seed) + " differs between runs");
    ++pairs;
  };
  for (const char* f : {"minimal.scn", "signature_attack.scn", "failover.scn"}) {
    for (std::uint64_t seed : {1, 2, 77}) twice(load_scenario(scenario_path(f)), seed, f);
  }
  for (std::uint64_t i = 1; i <= 10; ++i) {
    twice(parse_scenario_text(random_scenario(i)), i, "random " + std::to_string(i));
  }
  Scenario s = load_scenario(scenario_path("signature_attack.scn"));
  e.that(sweep_parallel(s, 1, 8) == sweep_serial(s, 1, 8), "parallel sweep differs from serial");
  return e.done(std::to_string(pairs) + " repeated runs hash identically; parallel sweep matches");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "state machine oracle", state_machine_oracle},
      {2, "misuse detection latency", misuse_latency},
      {3, "isolation soundness", isolation_soundness},
      {4, "red alert completeness", red_alert_completeness},
      {5, "failover continuity", failover_continuity},
      {6, "policy consistency", policy_consistency},
      {7, "leaf sensor operations", leaf_sensor_ops},
      {8, "anomaly false positive rate", false_positive_rate},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("%s criterion %d (%s): %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
