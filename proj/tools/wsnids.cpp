// wsnids: validate scenarios, run simulations, and summarize event logs.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wsnids/error.hpp"
#include "wsnids/report.hpp"
#include "wsnids/run.hpp"
#include "wsnids/scenario.hpp"

namespace fs = std::filesystem;
using namespace wsnids;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kValidation = 3,
  kRuntime = 4,
};

bool use_color() {
  return std::getenv("NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::pair<std::uint64_t, std::uint64_t> parse_sweep(const std::string& spec) {
  // seeds=A..B or A..B
  std::string range = spec.rfind("seeds=", 0) == 0 ? spec.substr(6) : spec;
  auto dots = range.find("..");
  if (dots == std::string::npos) throw CLI::ValidationError("--sweep", "expected seeds=A..B");
  try {
    return {std::stoull(range.substr(0, dots)), std::stoull(range.substr(dots + 2))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--sweep", "expected seeds=A..B");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical WSN intrusion detection simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();

  std::uint64_t seed = 1;
  std::optional<Tick> until;
  std::string out_dir = "out";
  std::string sweep;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write log and report");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--seed", seed, "RNG seed");
  run_cmd->add_option("--until", until, "Override the scenario run length");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--sweep", sweep, "Run seeds=A..B in parallel and merge reports");

  std::string log_path;
  std::string format = "table";
  auto* report_cmd = app.add_subcommand("report", "Summarize an event log");
  report_cmd->add_option("--log", log_path, "Event log file")->required();
  report_cmd->add_option("--format", format, "table or machine")
      ->check(CLI::IsMember({"table", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) {
      Scenario s = load_scenario(scenario_path);
      std::cout << "ok: " << s.topology.size() << " nodes, " << s.attacks.size()
                << " attacks, " << s.failures.size() << " failures, " << s.policies.size()
                << " policies, run length " << s.run_length << "\n";
      return kOk;
    }

    if (*run_cmd) {
      Scenario s = load_scenario(scenario_path);
      fs::create_directories(out_dir);
      if (!sweep.empty()) {
        auto [first, last] = parse_sweep(sweep);
        auto reports = sweep_parallel(s, first, last, until,
                                      [&](std::uint64_t sd, const RunResult& r) {
                                        const auto tag = std::to_string(sd);
                                        write_file(fs::path(out_dir) / ("events_seed" + tag + ".log"),
                                                   r.log.to_string());
                                        write_file(fs::path(out_dir) / ("report_seed" + tag + ".json"),
                                                   emit_report(r.report, ReportFormat::Machine));
                                      });
        RunReport merged = merge_reports(reports);
        write_file(fs::path(out_dir) / ("report_sweep" + std::to_string(first) + "-" +
                                        std::to_string(last) + ".json"),
                   emit_report(merged, ReportFormat::Machine));
        std::cout << emit_report(merged, ReportFormat::Table, use_color());
        return kOk;
      }
      RunResult r = run_scenario(s, RngSeed{seed}, until);
      const auto tag = std::to_string(seed);
      write_file(fs::path(out_dir) / ("events_seed" + tag + ".log"), r.log.to_string());
      write_file(fs::path(out_dir) / ("report_seed" + tag + ".json"),
                 emit_report(r.report, ReportFormat::Machine));
      std::cout << emit_report(r.report, ReportFormat::Table, use_color());
      return kOk;
    }

    if (*report_cmd) {
      std::ifstream in(log_path);
      if (!in) throw Error("cannot open " + log_path);
      RunReport r = build_report(EventLog::read(in));
      std::cout << emit_report(r, format == "machine" ? ReportFormat::Machine
                                                      : ReportFormat::Table,
                               format == "table" && use_color());
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scenario:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
