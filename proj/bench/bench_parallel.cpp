// Serial reference vs OpenMP kernels: offline traffic replay and seed sweeps.

#include <benchmark/benchmark.h>

#include "wsnids/replay.hpp"
#include "wsnids/run.hpp"
#include "wsnids/scenario.hpp"

using namespace wsnids;

namespace {

ReplayPlan make_plan(std::size_t sensors) {
  ReplayPlan plan;
  plan.seed = RngSeed{7};
  plan.ticks = 10'000;
  plan.window = 10;
  for (std::size_t i = 0; i < sensors; ++i) {
    plan.sensors.push_back(NodeId{static_cast<std::uint32_t>(100 + i)});
    plan.means.push_back(2.0);
  }
  return plan;
}

const char* kSweepScenario = R"(
[topology]
regions = 2
clusters_per_region = 2
sensors_per_cluster = 5
region_adjacency = R1-R2
[policies]
policy at=0 kind=profile pkt_rate=2:0.45 drop_ratio=0:0.05 fwd_ratio=1:0.05 dup_count=0:0.5
policy at=0 kind=signature id=s7 tag=s7
[attacks]
attack node=S1.1.1 kind=signature sig=s7 start=50 stop=400
[run]
length = 1000
)";

void BM_ReplaySerial(benchmark::State& state) {
  auto plan = make_plan(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(replay_window_counts_serial(plan));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10'000);
}

void BM_ReplayParallel(benchmark::State& state) {
  auto plan = make_plan(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(replay_window_counts_parallel(plan));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10'000);
}

void BM_SweepSerial(benchmark::State& state) {
  Scenario s = parse_scenario_text(kSweepScenario);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_serial(s, 1, static_cast<std::uint64_t>(state.range(0))));
  }
}

void BM_SweepParallel(benchmark::State& state) {
  Scenario s = parse_scenario_text(kSweepScenario);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_parallel(s, 1, static_cast<std::uint64_t>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(BM_ReplaySerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplayParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
