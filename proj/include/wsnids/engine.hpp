#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "wsnids/event_log.hpp"
#include "wsnids/ida.hpp"
#include "wsnids/policy.hpp"
#include "wsnids/response.hpp"
#include "wsnids/topology.hpp"
#include "wsnids/traffic.hpp"

namespace wsnids {

// ---- messages carried along tree edges -----------------------------------

struct AlertMsg {
  Alert alert;
};

struct PolicyMsg {
  Policy policy;
};

/// Per-window report; doubles as the heartbeat. An RPA relays its LPAs'
/// reports upward, so `heartbeats` names every agent whose report this is.
struct ReportMsg {
  NodeId reporter;
  Tick window_end = 0;
  std::vector<NodeId> heartbeats;
  std::vector<StimulusVector> clean_vectors;  // LPA -> RPA only
  std::vector<NodeClassState> mirrors;
  std::vector<Observation> close_watch;  // reconnected suspects
};

struct MaliciousMsg {
  NodeId node;
  NodeId origin;
};

using Message = std::variant<AlertMsg, PolicyMsg, ReportMsg, MaliciousMsg>;

std::string_view message_name(const Message& m);

// ---- events ---------------------------------------------------------------

enum class EventKind {
  TrafficRecord,
  MessageDeliver,
  AttackStart,
  AttackStop,
  NodeFail,
  TimerFire
};

std::string_view to_string(EventKind k);

struct Delivery {
  NodeId from;
  NodeId to;
  Message msg;
};

struct Timer {
  std::string name;
  std::uint64_t arg = 0;
};

using Payload =
    std::variant<std::monostate, TrafficRecord, Delivery, AttackSpec, Timer>;

struct Event {
  Tick at = 0;
  EventKind kind = EventKind::TimerFire;
  NodeId subject;
  Payload payload;
  std::uint64_t seq = 0;
};

/// Deterministic discrete-event loop. Events dispatch in (at, seq) order;
/// seq is the insertion order. Single-threaded by construction.
class Engine {
 public:
  using Handler = std::function<void(const Event&)>;

  /// `topology` must outlive the engine; it is consulted by deliver().
  explicit Engine(const Topology& topology) : topology_(&topology) {}

  Tick now() const { return now_; }

  /// Throws PastEvent when at < now(). Returns the assigned seq.
  std::uint64_t schedule(Tick at, EventKind kind, NodeId subject,
                         Payload payload = {});
  /// Schedules a MessageDeliver at now() + latency. Throws IllegalRoute
  /// unless (from, to) is a parent-child edge.
  void deliver(NodeId from, NodeId to, Message msg, Tick latency);

  void set_handler(Handler h) { handler_ = std::move(h); }

  /// Dispatches every event with at <= end, then advances now() to end.
  const EventLog& run_until(Tick end);

  /// Appends an agent record at the current tick and dispatch seq.
  void emit(std::string kind, NodeId subject, Fields fields);

  const EventLog& log() const { return log_; }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }
  std::uint64_t scheduled() const { return next_seq_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  void log_event(const Event& e);

  const Topology* topology_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  Handler handler_;
  EventLog log_;
  Tick now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t current_seq_ = 0;
  std::uint64_t dispatched_ = 0;
};

}  // namespace wsnids
