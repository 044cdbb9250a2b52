#include "wsnids/run.hpp"

#include "wsnids/error.hpp"
#include "wsnids/simulation.hpp"

namespace wsnids {

RunResult run_scenario(const Scenario& s, RngSeed seed, std::optional<Tick> until) {
  Scenario effective = s;
  // Schedules past a shortened end are simply never dispatched.
  if (until) effective.run_length = *until;
  Simulation sim(effective, seed);
  sim.run();
  RunResult r{sim.log(), {}};
  r.report = build_report(r.log);
  return r;
}

std::vector<RunReport> sweep_serial(const Scenario& s, std::uint64_t first,
                                    std::uint64_t last, std::optional<Tick> until,
                                    const RunSink& sink) {
  if (last < first) throw SpecError("sweep range is empty");
  std::vector<RunReport> out;
  for (std::uint64_t seed = first; seed <= last; ++seed) {
    RunResult r = run_scenario(s, RngSeed{seed}, until);
    if (sink) sink(seed, r);
    out.push_back(std::move(r.report));
  }
  return out;
}

std::vector<RunReport> sweep_parallel(const Scenario& s, std::uint64_t first,
                                      std::uint64_t last, std::optional<Tick> until,
                                      const RunSink& sink) {
  if (last < first) throw SpecError("sweep range is empty");
  const auto n = static_cast<std::int64_t>(last - first + 1);
  std::vector<RunReport> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint64_t seed = first + static_cast<std::uint64_t>(i);
    RunResult r = run_scenario(s, RngSeed{seed}, until);
    if (sink) sink(seed, r);
    out[static_cast<std::size_t>(i)] = std::move(r.report);
  }
  return out;
}

}  // namespace wsnids
