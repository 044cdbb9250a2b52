#include "wsnids/simulation.hpp"

#include <algorithm>

#include "wsnids/error.hpp"

namespace wsnids {

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string out;
  for (NodeId n : ids) {
    if (!out.empty()) out += '|';
    out += to_string(n);
  }
  return out.empty() ? "-" : out;
}

std::string describe_finding(NodeId sensor, std::span<const Finding> findings) {
  for (const auto& f : findings) {
    if (f.subject != sensor) continue;
    if (const auto* m = std::get_if<MisuseFinding>(&f.what)) {
      return "misuse:" + m->signature;
    }
    return "anomaly:" + std::string(to_string(std::get<AnomalyFinding>(f.what).feature));
  }
  return "none";
}

Fields class_fields(const NodeClassState& s) {
  return {{"class", std::string(to_string(s.cls))},
          {"banned_until", s.banned_until ? std::to_string(*s.banned_until) : "-"}};
}

}  // namespace

Simulation::Simulation(const Scenario& scenario, RngSeed seed)
    : scenario_(scenario),
      seed_(seed),
      topology_(scenario.topology),
      engine_(topology_),
      bpdp_(*topology_.base_station()),
      default_response_(ResponseParams::for_window(scenario.window)) {
  heartbeats_.timeout = scenario_.effective_timeout();
  for (const auto& [id, info] : topology_.nodes()) {
    live_.insert(id);
    switch (info.role) {
      case NodeRole::RegionalNode:
      case NodeRole::ClusterNode: {
        Agent a;
        a.repo = PolicyRepository(id);
        a.effective.response = default_response_;
        agents_.emplace(id, std::move(a));
        heartbeats_.record(id, 0);
        break;
      }
      case NodeRole::Sensor:
        sensor_ops_[id];
        sources_.emplace(id, SensorTrafficSource(seed_, id,
                                                 scenario_.traffic.mean_for(id)));
        attack_streams_.emplace(id, Stream(derive_seed(seed_.value, id.value, kAttackSalt)));
        break;
      case NodeRole::BaseStation:
        break;
    }
  }
  for (NodeId c : topology_.nodes_with_role(NodeRole::ClusterNode)) {
    for (NodeId s : topology_.children_of(c)) {
      agents_.at(c).classes.emplace(s, NodeClassState::fresh(s, 0));
    }
  }

  engine_.set_handler([this](const Event& e) { on_event(e); });
  engine_.emit("RunInfo", bs(),
               {{"seed", std::to_string(seed_.value)},
                {"window", std::to_string(scenario_.window)},
                {"length", std::to_string(scenario_.run_length)},
                {"latency", std::to_string(scenario_.hop_latency)},
                {"timeout", std::to_string(heartbeats_.timeout)},
                {"nodes", std::to_string(topology_.size())}});

  for (std::size_t i = 0; i < scenario_.policies.size(); ++i) {
    engine_.schedule(scenario_.policies[i].at, EventKind::TimerFire, bs(),
                     Timer{"policy", i});
  }
  for (const auto& a : scenario_.attacks) {
    engine_.schedule(a.start, EventKind::AttackStart, a.attacker, a);
    engine_.schedule(a.stop, EventKind::AttackStop, a.attacker, a);
  }
  for (const auto& f : scenario_.failures) {
    engine_.schedule(f.at, EventKind::NodeFail, f.node);
  }
  engine_.schedule(0, EventKind::TimerFire, bs(), Timer{"clock", 0});
}

const EventLog& Simulation::run_until(Tick end) { return engine_.run_until(end); }

const EventLog& Simulation::run() {
  run_until(scenario_.run_length);
  finish();
  return engine_.log();
}

void Simulation::finish() {
  if (finished_) return;
  finished_ = true;
  for (const auto& [id, info] : topology_.nodes()) {
    const OpCounter& c = ops(id);
    engine_.emit("Ops", id,
                 {{"role", std::string(to_string(info.role))},
                  {"total", std::to_string(c.total())},
                  {"preprocess", std::to_string(c.preprocess)},
                  {"signature", std::to_string(c.signature)},
                  {"anomaly", std::to_string(c.anomaly)},
                  {"postprocess", std::to_string(c.postprocess)},
                  {"response", std::to_string(c.response)}});
  }
}

Simulation::Agent& Simulation::agent(NodeId id) {
  auto it = agents_.find(id);
  if (it == agents_.end()) throw UnknownNode("no agent at node " + to_string(id));
  return it->second;
}

const PolicyRepository& Simulation::repository(NodeId id) const {
  if (id == bpdp_.id()) return bpdp_.repository();
  auto it = agents_.find(id);
  if (it == agents_.end()) throw UnknownNode("no agent at node " + to_string(id));
  return it->second.repo;
}

const EffectivePolicy& Simulation::effective(NodeId id) const {
  auto it = agents_.find(id);
  if (it == agents_.end()) throw UnknownNode("no agent at node " + to_string(id));
  return it->second.effective;
}

const NodeClassState* Simulation::class_state(NodeId sensor) const {
  auto parent = topology_.parent_of(sensor);
  if (!parent) return nullptr;
  auto it = agents_.find(*parent);
  if (it == agents_.end()) return nullptr;
  auto st = it->second.classes.find(sensor);
  return st == it->second.classes.end() ? nullptr : &st->second;
}

const OpCounter& Simulation::ops(NodeId node) const {
  static const OpCounter kNone;
  if (auto it = agents_.find(node); it != agents_.end()) return it->second.ops;
  if (auto it = sensor_ops_.find(node); it != sensor_ops_.end()) return it->second;
  return kNone;
}

// ---- dispatch -------------------------------------------------------------

void Simulation::on_event(const Event& e) {
  switch (e.kind) {
    case EventKind::TimerFire: {
      const auto& timer = std::get<Timer>(e.payload);
      if (timer.name == "clock") {
        on_clock(e.at);
      } else if (timer.name == "policy") {
        const auto& sp = scenario_.policies.at(timer.arg);
        issue_policy(sp.body, sp.scope);
      }
      break;
    }
    case EventKind::TrafficRecord:
      on_traffic(std::get<TrafficRecord>(e.payload));
      break;
    case EventKind::MessageDeliver:
      on_delivery(std::get<Delivery>(e.payload));
      break;
    case EventKind::AttackStart: {
      const auto& a = std::get<AttackSpec>(e.payload);
      active_attacks_[a.attacker] = a;
      break;
    }
    case EventKind::AttackStop: {
      const auto& a = std::get<AttackSpec>(e.payload);
      auto it = active_attacks_.find(a.attacker);
      if (it != active_attacks_.end() && it->second == a) active_attacks_.erase(it);
      break;
    }
    case EventKind::NodeFail:
      live_.erase(e.subject);
      break;
  }
}

void Simulation::on_clock(Tick t) {
  if (t > 0) check_failures(t);
  if (t > 0 && t % scenario_.window == 0) {
    for (NodeId c : topology_.nodes_with_role(NodeRole::ClusterNode)) {
      if (live(c)) lpa_close_window(c, t);
    }
    for (NodeId r : topology_.nodes_with_role(NodeRole::RegionalNode)) {
      if (live(r)) rpa_heartbeat(r, t);
    }
  }
  if (t < scenario_.run_length) {
    generate_traffic(t);
    engine_.schedule(t + 1, EventKind::TimerFire, bs(), Timer{"clock", t + 1});
  }
}

void Simulation::generate_traffic(Tick t) {
  for (auto& [sensor, source] : sources_) {
    const std::uint32_t n = source.next_count();
    auto it = active_attacks_.find(sensor);
    const AttackSpec* attack =
        it != active_attacks_.end() && it->second.active_at(t) ? &it->second : nullptr;
    NodeId dst = *topology_.parent_of(sensor);
    TrafficRecord r = shape_record(sensor, dst, n, attack, attack_streams_.at(sensor));
    if (r.pkts == 0 && r.dups == 0 && r.tags.empty()) continue;
    engine_.schedule(t, EventKind::TrafficRecord, sensor, std::move(r));
  }
}

void Simulation::on_traffic(const TrafficRecord& r) {
  if (!live(r.dst)) return;  // nobody listening until takeover
  Agent& lpa = agent(r.dst);
  lpa.window.push_back(r);
  auto st = lpa.classes.find(r.src);
  const bool banned = lpa.local_bans.count(r.src) || lpa.effective.bans.count(r.src);
  // No state yet means Fresh, which admits traffic.
  const bool admitted =
      !banned && (st == lpa.classes.end() || admits_traffic(st->second, engine_.now()));
  engine_.emit(admitted ? "Forward" : "Discard", r.src,
               {{"lpa", to_string(r.dst)}, {"pkts", std::to_string(r.sent())}});
}

// ---- LPA / RPA window processing --------------------------------------------

void Simulation::lpa_close_window(NodeId id, Tick t) {
  Agent& lpa = agent(id);
  const NodeId parent = *topology_.parent_of(id);
  const Tick latency = scenario_.hop_latency;

  ++lpa.ops.preprocess;
  std::vector<StimulusVector> vectors = preprocess(lpa.window, t, scenario_.window);
  lpa.window.clear();
  const NormalProfile* profile =
      lpa.effective.profile ? &*lpa.effective.profile : nullptr;
  DetectionOutcome outcome = detect(vectors, lpa.effective.signatures, profile, lpa.ops);

  std::vector<NodeId> entered_suspect;
  std::vector<Observation> close_watch;
  for (NodeId sensor : topology_.children_of(id)) {
    auto [it, fresh] = lpa.classes.try_emplace(sensor, NodeClassState::fresh(sensor, t));
    NodeClassState& state = it->second;
    ++lpa.ops.response;
    Observation obs = watchdog_verdict(sensor, t, outcome.findings);
    engine_.emit("Observation", sensor,
                 {{"lpa", to_string(id)},
                  {"verdict", std::string(to_string(obs.verdict))},
                  {"finding", describe_finding(sensor, outcome.findings)}});
    const bool reobserving = state.cls == NodeClass::Suspect && state.banned_until &&
                             t > *state.banned_until;
    if (reobserving) close_watch.push_back(obs);

    TransitionResult res = transition(state, obs, t, lpa.effective.response);
    const NodeClass from = state.cls;
    state = std::move(res.state);
    if (state.cls != from) {
      Fields f{{"lpa", to_string(id)},
               {"from", std::string(to_string(from))},
               {"to", std::string(to_string(state.cls))},
               {"reason", std::string(res.reason)}};
      auto extra = class_fields(state);
      f.push_back(extra[1]);
      engine_.emit("ClassChange", sensor, std::move(f));
    }
    for (Action a : res.actions) {
      if (a == Action::EmitRedAlert) entered_suspect.push_back(sensor);
      if (a == Action::Reconnect) {
        engine_.emit("Reconnect", sensor, {{"lpa", to_string(id)}});
      }
      if (a == Action::PermanentBan) {
        lpa.local_bans.insert(sensor);
        engine_.emit("LocalBan", sensor, {{"lpa", to_string(id)}});
        engine_.deliver(id, parent, MaliciousMsg{sensor, id}, latency);
      }
    }
  }

  ++lpa.ops.postprocess;
  PostprocessOutput out = postprocess({id, t, outcome.findings, entered_suspect});
  for (const auto& a : out.alerts) {
    Fields f{{"origin", to_string(id)},
             {"role", "LPA"},
             {"alert", std::string(to_string(a.kind))}};
    if (a.kind == AlertKind::Misuse) {
      f.emplace_back("detail", a.signature);
    } else {
      f.emplace_back("detail", std::string(to_string(a.feature)) + ":" + format_double(a.score));
    }
    engine_.emit("Alert", a.subject, std::move(f));
    engine_.deliver(id, parent, AlertMsg{a}, latency);
  }
  for (const auto& a : out.red_alerts) {
    engine_.emit("RedAlert", a.subject, {{"origin", to_string(id)}});
    engine_.deliver(id, parent, AlertMsg{a}, latency);
  }

  ReportMsg report;
  report.reporter = id;
  report.window_end = t;
  report.heartbeats = {id};
  report.clean_vectors = std::move(outcome.clean);
  for (const auto& [sensor, state] : lpa.classes) {
    if (topology_.parent_of(sensor) == id) report.mirrors.push_back(state);
  }
  report.close_watch = std::move(close_watch);
  engine_.deliver(id, parent, std::move(report), latency);
}

void Simulation::rpa_heartbeat(NodeId id, Tick t) {
  ReportMsg report;
  report.reporter = id;
  report.window_end = t;
  report.heartbeats = {id};
  engine_.deliver(id, bs(), std::move(report), scenario_.hop_latency);
}

void Simulation::rpa_on_report(NodeId id, const ReportMsg& in) {
  Agent& rpa = agent(id);
  for (const auto& m : in.mirrors) rpa.mirrors[m.node] = m;
  if (!in.close_watch.empty()) {
    engine_.emit("ObsCopy", id, {{"from", to_string(in.reporter)},
                                 {"count", std::to_string(in.close_watch.size())}});
  }
  if (!in.clean_vectors.empty()) {
    ++rpa.ops.preprocess;
    const NormalProfile* profile =
        rpa.effective.profile ? &*rpa.effective.profile : nullptr;
    DetectionOutcome outcome =
        detect(in.clean_vectors, rpa.effective.signatures, profile, rpa.ops);
    ++rpa.ops.postprocess;
    PostprocessOutput out = postprocess({id, engine_.now(), outcome.findings, {}});
    for (const auto& a : out.alerts) {
      Fields f{{"origin", to_string(id)},
               {"role", "RPA"},
               {"alert", std::string(to_string(a.kind))}};
      if (a.kind == AlertKind::Misuse) {
        f.emplace_back("detail", a.signature);
      } else {
        f.emplace_back("detail", std::string(to_string(a.feature)) + ":" + format_double(a.score));
      }
      engine_.emit("Alert", a.subject, std::move(f));
      engine_.deliver(id, bs(), AlertMsg{a}, scenario_.hop_latency);
    }
  }
  ReportMsg up = in;
  up.clean_vectors.clear();
  engine_.deliver(id, bs(), std::move(up), scenario_.hop_latency);
}

// ---- messages -----------------------------------------------------------------

void Simulation::on_delivery(const Delivery& d) {
  if (!live(d.to)) {
    engine_.emit("MessageDrop", d.to, {{"from", to_string(d.from)},
                                       {"msg", std::string(message_name(d.msg))}});
    return;
  }
  const NodeRole role = topology_.role(d.to);
  const Tick latency = scenario_.hop_latency;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AlertMsg>) {
          if (role == NodeRole::RegionalNode) {
            engine_.deliver(d.to, bs(), m, latency);
          } else if (role == NodeRole::BaseStation) {
            engine_.emit("AlertRecv", m.alert.subject,
                         {{"origin", to_string(m.alert.origin_agent)},
                          {"alert", std::string(to_string(m.alert.kind))},
                          {"raised", std::to_string(m.alert.at)}});
          }
        } else if constexpr (std::is_same_v<T, PolicyMsg>) {
          if (role == NodeRole::RegionalNode) {
            forward_policy(d.to, m.policy);
          } else if (role == NodeRole::ClusterNode &&
                     in_scope(m.policy.scope, d.to, topology_, domains_)) {
            apply_at(d.to, m.policy);
          }
        } else if constexpr (std::is_same_v<T, ReportMsg>) {
          if (role == NodeRole::RegionalNode) {
            rpa_on_report(d.to, m);
          } else if (role == NodeRole::BaseStation) {
            for (NodeId hb : m.heartbeats) heartbeats_.record(hb, engine_.now());
            for (const auto& s : m.mirrors) bpdp_mirrors_[s.node] = s;
            if (!m.close_watch.empty()) {
              engine_.emit("ObsCopy", bs(), {{"from", to_string(m.reporter)},
                                             {"count", std::to_string(m.close_watch.size())}});
            }
          }
        } else {
          if (role == NodeRole::RegionalNode) {
            engine_.deliver(d.to, bs(), m, latency);
          } else if (role == NodeRole::BaseStation) {
            if (bpdp_.repository().holds_ban(m.node)) {
              engine_.emit("BanDuplicate", m.node, {{"origin", to_string(m.origin)}});
            } else {
              issue_policy(BanEntry{m.node}, Scope::all());
            }
          }
        }
      },
      d.msg);
}

Policy Simulation::issue_policy(PolicyBody body, Scope scope) {
  Policy p = bpdp_.issue(std::move(body), scope);
  Fields f{{"version", std::to_string(p.version)},
           {"kind", std::string(policy_kind_name(p.body))},
           {"scope", to_string(p.scope)}};
  if (const auto* ban = std::get_if<BanEntry>(&p.body)) {
    f.emplace_back("node", to_string(ban->node));
  }
  engine_.emit("PolicyIssued", bs(), std::move(f));
  auto hops = plan_dissemination(p, topology_, domains_,
                                 [this](NodeId n) { return live(n); });
  for (const auto& hop : hops) {
    engine_.deliver(bs(), hop.rpa, PolicyMsg{p}, scenario_.hop_latency);
  }
  return p;
}

void Simulation::forward_policy(NodeId rpa, const Policy& p) {
  if (in_scope(p.scope, rpa, topology_, domains_)) apply_at(rpa, p);
  for (NodeId lpa : topology_.children_of(rpa)) {
    if (in_scope(p.scope, lpa, topology_, domains_)) {
      engine_.deliver(rpa, lpa, PolicyMsg{p}, scenario_.hop_latency);
    }
  }
}

void Simulation::apply_at(NodeId id, const Policy& p) {
  Agent& a = agent(id);
  if (a.repo.apply(p) == ApplyResult::StaleVersion) {
    engine_.emit("PolicyStale", id, {{"version", std::to_string(p.version)},
                                     {"high_water", std::to_string(a.repo.high_water())}});
    return;
  }
  a.effective.apply(p);
  engine_.emit("PolicyApplied", id,
               {{"version", std::to_string(p.version)},
                {"kind", std::string(policy_kind_name(p.body))},
                {"scope", to_string(p.scope)}});
}

// ---- survivability ------------------------------------------------------------

void Simulation::check_failures(Tick t) {
  // A node can only be masked by a parent that is itself in this round, so
  // one call per tick is enough; children of a taken-over region are
  // re-evaluated from the next tick on.
  for (NodeId failed : detect_failure(topology_, heartbeats_, t, declared_failed_)) {
    declared_failed_.insert(failed);
    live_.erase(failed);
    take_over(failed, t);
  }
}

void Simulation::take_over(NodeId failed, Tick t) {
  NodeId successor;
  try {
    successor = select_successor(topology_, failed, [this](NodeId n) { return live(n); });
  } catch (const NoSuccessor&) {
    engine_.emit("Orphaned", failed,
                 {{"children", join_ids(topology_.children_of(failed))}});
    return;
  }
  TakeoverRecord rec = transfer_control(topology_, domains_, failed, successor, t);
  engine_.emit("Takeover", failed,
               {{"successor", to_string(successor)},
                {"role", std::string(to_string(topology_.role(failed)))},
                {"transferred", join_ids(rec.transferred)}});

  reprovision(successor);
  Agent& succ = agent(successor);
  if (topology_.role(failed) == NodeRole::ClusterNode) {
    for (NodeId sensor : rec.transferred) {
      auto mirror = bpdp_mirrors_.find(sensor);
      NodeClassState state = mirror != bpdp_mirrors_.end()
                                 ? mirror->second
                                 : NodeClassState::fresh(sensor, t);
      Fields f{{"lpa", to_string(successor)}};
      for (auto& kv : class_fields(state)) f.push_back(std::move(kv));
      engine_.emit("ClassRestore", sensor, std::move(f));
      succ.classes[sensor] = std::move(state);
    }
  } else {
    for (NodeId lpa : rec.transferred) {
      heartbeats_.record(lpa, t);
      if (!live(lpa)) continue;
      reprovision(lpa);
      for (NodeId sensor : topology_.children_of(lpa)) {
        if (auto m = bpdp_mirrors_.find(sensor); m != bpdp_mirrors_.end()) {
          succ.mirrors[sensor] = m->second;
        }
      }
    }
  }
  takeovers_.push_back(std::move(rec));
}

void Simulation::reprovision(NodeId id) {
  Agent& a = agent(id);
  restore(a.repo, snapshot(bpdp_.repository()), [&](const Policy& p) {
    return in_scope(p.scope, id, topology_, domains_);
  });
  a.effective = EffectivePolicy::rebuild(a.repo, default_response_);
  engine_.emit("Reprovision", id, {{"entries", std::to_string(a.repo.entries().size())},
                                   {"high_water", std::to_string(a.repo.high_water())}});
}

}  // namespace wsnids
