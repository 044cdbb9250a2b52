#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsnids/rng.hpp"
#include "wsnids/topology.hpp"

namespace wsnids {

using SignatureId = std::string;

enum class Behavior { Normal, Drop, Flood, Replay, KnownSignature };

struct BehaviorTag {
  Behavior behavior = Behavior::Normal;
  SignatureId signature;  // set for KnownSignature only

  bool operator==(const BehaviorTag&) const = default;
};

/// One tick of traffic from a sensor toward its cluster node.
struct TrafficRecord {
  NodeId src;
  NodeId dst;
  std::uint32_t pkts = 0;         // packets generated this tick
  std::uint32_t obligations = 0;  // packets the sensor had to forward
  std::uint32_t dropped = 0;      // obligations it silently dropped
  std::uint32_t dups = 0;         // replayed copies injected
  std::vector<BehaviorTag> tags;

  std::uint32_t sent() const { return pkts - dropped; }
  bool operator==(const TrafficRecord&) const = default;
};

enum class AttackKind { PacketDrop, Flood, Replay, KnownSignature };

struct AttackSpec {
  NodeId attacker;
  AttackKind kind = AttackKind::KnownSignature;
  double drop_rate = 0.0;        // PacketDrop, in [0,1]
  std::uint32_t multiplier = 1;  // Flood, >= 1
  SignatureId signature;         // KnownSignature
  Tick start = 0;
  Tick stop = 0;

  bool active_at(Tick t) const { return t >= start && t < stop; }
  bool operator==(const AttackSpec&) const = default;
};

std::string to_string(AttackKind k);
std::string to_string(const BehaviorTag& tag);
/// Tags joined with '|'; "Normal" when empty.
std::string format_tags(const std::vector<BehaviorTag>& tags);
std::vector<BehaviorTag> parse_tags(const std::string& text);

/// Inverse-CDF sampler for a Poisson distribution. The table is cut where
/// the remaining tail mass drops below 1e-15.
class PoissonTable {
 public:
  explicit PoissonTable(double mean);

  std::uint32_t sample(double u) const;
  double mean() const { return mean_; }
  const std::vector<double>& cdf() const { return cdf_; }

 private:
  double mean_;
  std::vector<double> cdf_;
};

struct TrafficModel {
  double default_mean = 2.0;
  std::map<NodeId, double> sensor_mean;

  double mean_for(NodeId sensor) const {
    auto it = sensor_mean.find(sensor);
    return it == sensor_mean.end() ? default_mean : it->second;
  }
};

/// Salt for the baseline per-sensor stream; the attack stream uses another,
/// so replaying the baseline offline needs nothing but (seed, sensor, mean).
inline constexpr std::uint64_t kBaselineSalt = 0x7261666669630001ULL;
inline constexpr std::uint64_t kAttackSalt = 0x61747461636b0002ULL;

/// Baseline packet counts for one sensor, one draw per tick from tick 0.
class SensorTrafficSource {
 public:
  SensorTrafficSource(RngSeed seed, NodeId sensor, double mean);

  std::uint32_t next_count() { return table_.sample(stream_.uniform()); }

 private:
  PoissonTable table_;
  Stream stream_;
};

/// Builds the record for one tick given the baseline draw and any attack
/// active on the sensor. `attack_stream` is only touched for PacketDrop.
TrafficRecord shape_record(NodeId src, NodeId dst, std::uint32_t baseline,
                           const AttackSpec* attack, Stream& attack_stream);

}  // namespace wsnids
