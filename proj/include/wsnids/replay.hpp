#pragma once

#include <cstdint>
#include <vector>

#include "wsnids/ida.hpp"
#include "wsnids/rng.hpp"
#include "wsnids/topology.hpp"

namespace wsnids {

/// Offline replay of the seeded baseline traffic, independent of the event
/// engine. Each sensor owns its stream, so sensors replay in parallel.
struct ReplayPlan {
  RngSeed seed;
  std::vector<NodeId> sensors;
  std::vector<double> means;  // parallel to sensors
  Tick ticks = 0;             // draws at ticks [0, ticks)
  Tick window = 10;

  std::size_t windows() const { return static_cast<std::size_t>(ticks / window); }
};

/// Packet totals per (sensor, window), row-major by sensor. Window k covers
/// ticks [k*W, (k+1)*W).
std::vector<std::uint64_t> replay_window_counts_serial(const ReplayPlan& plan);
std::vector<std::uint64_t> replay_window_counts_parallel(const ReplayPlan& plan);

struct FalsePositivePrediction {
  std::uint64_t windows = 0;
  std::uint64_t flagged = 0;
  double rate() const {
    return windows == 0 ? 0.0 : static_cast<double>(flagged) / static_cast<double>(windows);
  }
};

/// Windows the packet-rate test would flag under the profile. Silent
/// windows produce no stimulus vector and so are never flagged.
FalsePositivePrediction predict_false_positives(const std::vector<std::uint64_t>& counts,
                                                const ReplayPlan& plan,
                                                const NormalProfile& profile);

}  // namespace wsnids
