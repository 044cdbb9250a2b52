#include "wsnids/engine.hpp"

#include "wsnids/error.hpp"

namespace wsnids {

std::string_view message_name(const Message& m) {
  switch (m.index()) {
    case 0: return "Alert";
    case 1: return "Policy";
    case 2: return "Report";
    case 3: return "Malicious";
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::TrafficRecord: return "TrafficRecord";
    case EventKind::MessageDeliver: return "MessageDeliver";
    case EventKind::AttackStart: return "AttackStart";
    case EventKind::AttackStop: return "AttackStop";
    case EventKind::NodeFail: return "NodeFail";
    case EventKind::TimerFire: return "TimerFire";
  }
  return "?";
}

std::uint64_t Engine::schedule(Tick at, EventKind kind, NodeId subject,
                               Payload payload) {
  if (at < now_) {
    throw PastEvent("event at tick " + std::to_string(at) +
                    " scheduled at tick " + std::to_string(now_));
  }
  Event e{at, kind, subject, std::move(payload), next_seq_++};
  queue_.push(std::move(e));
  return next_seq_ - 1;
}

void Engine::deliver(NodeId from, NodeId to, Message msg, Tick latency) {
  if (!topology_->is_tree_edge(from, to)) {
    throw IllegalRoute("no tree edge between " + to_string(from) + " and " +
                       to_string(to));
  }
  schedule(now_ + latency, EventKind::MessageDeliver, to,
           Delivery{from, to, std::move(msg)});
}

const EventLog& Engine::run_until(Tick end) {
  while (!queue_.empty() && queue_.top().at <= end) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.at;
    current_seq_ = e.seq;
    ++dispatched_;
    log_event(e);
    if (handler_) handler_(e);
  }
  if (end > now_) now_ = end;
  return log_;
}

void Engine::emit(std::string kind, NodeId subject, Fields fields) {
  log_.append({now_, current_seq_, std::move(kind), subject, std::move(fields)});
}

namespace {

Fields describe_message(const Delivery& d) {
  Fields f{{"from", to_string(d.from)},
           {"to", to_string(d.to)},
           {"msg", std::string(message_name(d.msg))}};
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AlertMsg>) {
          f.emplace_back("alert", std::string(to_string(m.alert.kind)));
          f.emplace_back("node", to_string(m.alert.subject));
        } else if constexpr (std::is_same_v<T, PolicyMsg>) {
          f.emplace_back("version", std::to_string(m.policy.version));
        } else if constexpr (std::is_same_v<T, ReportMsg>) {
          f.emplace_back("window", std::to_string(m.window_end));
        } else {
          f.emplace_back("node", to_string(m.node));
        }
      },
      d.msg);
  return f;
}

}  // namespace

void Engine::log_event(const Event& e) {
  Fields f;
  switch (e.kind) {
    case EventKind::TrafficRecord: {
      const auto& r = std::get<TrafficRecord>(e.payload);
      f = {{"src", to_string(r.src)},
           {"dst", to_string(r.dst)},
           {"pkts", std::to_string(r.pkts)},
           {"obl", std::to_string(r.obligations)},
           {"drop", std::to_string(r.dropped)},
           {"dup", std::to_string(r.dups)},
           {"tags", format_tags(r.tags)}};
      break;
    }
    case EventKind::MessageDeliver:
      f = describe_message(std::get<Delivery>(e.payload));
      break;
    case EventKind::AttackStart:
    case EventKind::AttackStop: {
      const auto& a = std::get<AttackSpec>(e.payload);
      std::string param;
      switch (a.kind) {
        case AttackKind::PacketDrop: param = format_double(a.drop_rate); break;
        case AttackKind::Flood: param = std::to_string(a.multiplier); break;
        case AttackKind::Replay: param = "-"; break;
        case AttackKind::KnownSignature: param = a.signature; break;
      }
      f = {{"attack", to_string(a.kind)},
           {"param", param},
           {"start", std::to_string(a.start)},
           {"stop", std::to_string(a.stop)}};
      break;
    }
    case EventKind::NodeFail:
      break;
    case EventKind::TimerFire: {
      const auto& t = std::get<Timer>(e.payload);
      f = {{"timer", t.name}, {"arg", std::to_string(t.arg)}};
      break;
    }
  }
  log_.append({e.at, e.seq, std::string(to_string(e.kind)), e.subject, std::move(f)});
}

}  // namespace wsnids
