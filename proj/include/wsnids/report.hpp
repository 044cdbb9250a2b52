#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsnids/event_log.hpp"
#include "wsnids/topology.hpp"

namespace wsnids {

struct AttackOutcome {
  NodeId attacker;
  std::string kind;
  Tick injected_at = 0;
  std::optional<Tick> first_alert_at;
  std::optional<Tick> detection_latency;
  std::string detector;    // "LPA" or "RPA"; empty when undetected
  std::string alert_kind;  // "Misuse" / "Anomaly"; empty when undetected

  bool operator==(const AttackOutcome&) const = default;
};

struct NodeOps {
  NodeId node;
  std::string role;
  std::uint64_t total = 0;

  bool operator==(const NodeOps&) const = default;
};

struct TakeoverSummary {
  Tick at = 0;
  NodeId failed;
  NodeId successor;
  std::vector<NodeId> transferred;

  bool operator==(const TakeoverSummary&) const = default;
};

struct RunReport {
  std::uint64_t seed = 0;
  Tick window = 0;
  Tick length = 0;
  std::vector<AttackOutcome> attacks;
  std::uint64_t clean_windows = 0;  // sensor-windows with no attack active
  std::uint64_t false_positive_windows = 0;
  double false_positive_rate = 0.0;
  std::uint64_t isolation_violations = 0;
  std::uint64_t suspect_entries = 0;
  std::uint64_t red_alerts = 0;
  std::vector<NodeOps> ops;
  std::vector<TakeoverSummary> takeovers;

  bool operator==(const RunReport&) const = default;
};

/// Pure fold over the log: every number is recomputed from records alone.
RunReport build_report(const EventLog& log);

enum class ReportFormat { Table, Machine };

/// Machine format is JSON with a fixed field order.
std::string emit_report(const RunReport& r, ReportFormat format, bool color = false);
RunReport parse_machine_report(std::string_view text);

/// Reports from several seeds merged in input order: counts summed, rate
/// recomputed, attacks/takeovers concatenated, ops summed per node.
RunReport merge_reports(const std::vector<RunReport>& reports);

}  // namespace wsnids
