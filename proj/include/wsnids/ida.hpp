#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wsnids/topology.hpp"
#include "wsnids/traffic.hpp"

// Intrusion detection agent pipeline: pre-processor, signature processor,
// anomaly processor and post processor. Every function here is pure; the
// simulation wires them to agents and message delivery.

namespace wsnids {

enum class Feature { PktRate, DropRatio, FwdRatio, DupCount };

/// Fixed feature order; also the tie-break order of detect_anomaly().
inline constexpr std::array<Feature, 4> kFeatureOrder = {
    Feature::PktRate, Feature::DropRatio, Feature::FwdRatio, Feature::DupCount};

std::string_view to_string(Feature f);
std::optional<Feature> parse_feature(std::string_view name);

struct StimulusVector {
  NodeId node;
  Tick window_end = 0;
  double pkt_rate = 0.0;
  double drop_ratio = 0.0;
  double fwd_ratio = 1.0;
  std::uint64_t dup_count = 0;
  std::map<SignatureId, std::uint32_t> sig_tags;

  double feature(Feature f) const;
  bool operator==(const StimulusVector&) const = default;
};

enum class Comparison { Less, LessEqual, Greater, GreaterEqual };

struct FeatureBound {
  Feature feature = Feature::PktRate;
  Comparison op = Comparison::Greater;
  double value = 0.0;

  bool holds(const StimulusVector& v) const;
  bool operator==(const FeatureBound&) const = default;
};

/// Tag equality and/or a conjunction of feature thresholds. An absent tag
/// and empty bound list is rejected at load time, so every predicate is
/// total and non-trivial.
struct SignaturePredicate {
  std::optional<SignatureId> tag;
  std::vector<FeatureBound> bounds;

  bool matches(const StimulusVector& v) const;
  bool operator==(const SignaturePredicate&) const = default;
};

struct SignatureRecord {
  SignatureId id;
  SignaturePredicate predicate;
  std::string description;

  bool operator==(const SignatureRecord&) const = default;
};

struct FeatureStats {
  double mean = 0.0;
  double stdev = 1.0;

  bool operator==(const FeatureStats&) const = default;
};

struct NormalProfile {
  std::map<Feature, FeatureStats> features;
  double anomaly_threshold = 3.0;

  bool operator==(const NormalProfile&) const = default;
};

using AnomalyScores = std::map<Feature, double>;

struct FeatureScore {
  Feature feature;
  double score;
};

struct MisuseFinding {
  SignatureId signature;
};
struct AnomalyFinding {
  Feature feature;
  double score;
};

struct Finding {
  NodeId subject;
  std::variant<MisuseFinding, AnomalyFinding> what;

  bool is_misuse() const { return what.index() == 0; }
};

enum class AlertKind { Misuse, Anomaly, RedAlert };
std::string_view to_string(AlertKind k);

struct Alert {
  AlertKind kind = AlertKind::Misuse;
  SignatureId signature;              // Misuse
  Feature feature = Feature::PktRate;  // Anomaly
  double score = 0.0;                  // Anomaly
  NodeId origin_agent;
  NodeId subject;
  Tick at = 0;
};

/// One vector per sensor with at least one record in the window, ascending
/// by node id. Ratios are 0/1 when the sensor had no forwarding obligations.
std::vector<StimulusVector> preprocess(std::span<const TrafficRecord> window,
                                       Tick window_end, Tick window_length);

/// First matching record in database order, which is version order.
std::optional<SignatureId> signature_match(
    const StimulusVector& v, std::span<const SignatureRecord> db);

/// |x - mean| / stdev for every feature. Throws ProfileMissing when the
/// profile lacks any of the four features.
AnomalyScores anomaly_score(const StimulusVector& v, const NormalProfile& p);

/// Highest score strictly above the threshold; ties go to the earlier
/// feature in kFeatureOrder.
std::optional<FeatureScore> detect_anomaly(const AnomalyScores& scores,
                                           const NormalProfile& p);

/// Counts invocations of pipeline stages at an agent.
struct OpCounter {
  std::uint64_t preprocess = 0;
  std::uint64_t signature = 0;
  std::uint64_t anomaly = 0;
  std::uint64_t postprocess = 0;
  std::uint64_t response = 0;

  std::uint64_t total() const {
    return preprocess + signature + anomaly + postprocess + response;
  }
};

/// Signature processor then, on no match, anomaly processor. Vectors that
/// match a signature never reach the anomaly path.
struct DetectionOutcome {
  std::vector<Finding> findings;
  std::vector<StimulusVector> clean;  // neither matched nor anomalous
};

DetectionOutcome detect(std::span<const StimulusVector> vectors,
                        std::span<const SignatureRecord> db,
                        const NormalProfile* profile, OpCounter& ops);

struct PostprocessInput {
  NodeId agent;
  Tick now = 0;
  std::span<const Finding> findings;
  /// Sensors whose response state machine entered Suspect this window.
  std::span<const NodeId> entered_suspect;
};

struct PostprocessOutput {
  std::vector<Alert> alerts;      // Misuse / Anomaly, one per finding
  std::vector<Alert> red_alerts;  // one per Suspect entry
  bool heartbeat = true;          // a report always goes upward
};

PostprocessOutput postprocess(const PostprocessInput& in);

}  // namespace wsnids
