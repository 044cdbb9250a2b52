#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wsnids/event_log.hpp"
#include "wsnids/report.hpp"
#include "wsnids/rng.hpp"
#include "wsnids/scenario.hpp"

namespace wsnids {

struct RunResult {
  EventLog log;
  RunReport report;
};

/// One full run. `until` overrides the scenario run length when given.
RunResult run_scenario(const Scenario& s, RngSeed seed,
                       std::optional<Tick> until = std::nullopt);

/// Called once per finished run. The parallel sweep calls it from worker
/// threads, so it must be safe to call concurrently for different seeds.
using RunSink = std::function<void(std::uint64_t seed, const RunResult&)>;

/// Independent runs for seeds first..last inclusive, reports returned in
/// seed order. The parallel variant distributes seeds over OpenMP threads;
/// the serial one is the reference it is tested against.
std::vector<RunReport> sweep_serial(const Scenario& s, std::uint64_t first,
                                    std::uint64_t last,
                                    std::optional<Tick> until = std::nullopt,
                                    const RunSink& sink = {});
std::vector<RunReport> sweep_parallel(const Scenario& s, std::uint64_t first,
                                      std::uint64_t last,
                                      std::optional<Tick> until = std::nullopt,
                                      const RunSink& sink = {});

}  // namespace wsnids
