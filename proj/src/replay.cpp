#include "wsnids/replay.hpp"

#include <cmath>

#include "wsnids/error.hpp"
#include "wsnids/traffic.hpp"

namespace wsnids {

namespace {

void replay_one(const ReplayPlan& plan, std::size_t i, std::uint64_t* row) {
  SensorTrafficSource source(plan.seed, plan.sensors[i], plan.means[i]);
  const std::size_t windows = plan.windows();
  for (Tick t = 0; t < plan.ticks; ++t) {
    const std::uint32_t n = source.next_count();
    const std::size_t w = static_cast<std::size_t>(t / plan.window);
    if (w < windows) row[w] += n;
  }
}

void check(const ReplayPlan& plan) {
  if (plan.sensors.size() != plan.means.size()) {
    throw SpecError("replay plan: one mean per sensor");
  }
  if (plan.window == 0) throw SpecError("replay plan: window >= 1");
}

}  // namespace

std::vector<std::uint64_t> replay_window_counts_serial(const ReplayPlan& plan) {
  check(plan);
  std::vector<std::uint64_t> out(plan.sensors.size() * plan.windows(), 0);
  for (std::size_t i = 0; i < plan.sensors.size(); ++i) {
    replay_one(plan, i, out.data() + i * plan.windows());
  }
  return out;
}

std::vector<std::uint64_t> replay_window_counts_parallel(const ReplayPlan& plan) {
  check(plan);
  std::vector<std::uint64_t> out(plan.sensors.size() * plan.windows(), 0);
  const auto n = static_cast<std::int64_t>(plan.sensors.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    replay_one(plan, idx, out.data() + idx * plan.windows());
  }
  return out;
}

FalsePositivePrediction predict_false_positives(const std::vector<std::uint64_t>& counts,
                                                const ReplayPlan& plan,
                                                const NormalProfile& profile) {
  const FeatureStats& rate = profile.features.at(Feature::PktRate);
  FalsePositivePrediction out;
  const double w = static_cast<double>(plan.window);
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    ++out.windows;
    const double score = std::fabs(static_cast<double>(c) / w - rate.mean) / rate.stdev;
    if (score > profile.anomaly_threshold) ++out.flagged;
  }
  return out;
}

}  // namespace wsnids
