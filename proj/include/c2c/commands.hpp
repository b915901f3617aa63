#pragma once

#include <c2c/adapter.hpp>
#include <c2c/metrics.hpp>
#include <c2c/scheduler.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace c2c {

struct RunConfig {
  std::filesystem::path scenario_path;
  std::optional<PolicyKind> policy;
  std::optional<EvaluatorKind> evaluator;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_steps;
  std::filesystem::path out_dir = "out";
  AdapterSettings adapter;
  bool parallel_decisions = false;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIncomplete = 2, kExitAdapter = 3 };

/// Scenario with the command-line overrides applied.
Scenario apply_overrides(Scenario scenario, const RunConfig& config);

[[nodiscard]] bool needs_adapter(const Scenario& scenario) noexcept;

struct RunOutcome {
  SimResult result;
  MetricsReport metrics;
};

/// Completion time of a no_comm run of the same scenario, if it finishes.
std::optional<double> baseline_time(const Scenario& scenario);

/// Runs one scenario in memory. `adapter` is required iff needs_adapter(scenario).
/// The speedup baseline is a no_comm run of the same scenario.
RunOutcome simulate(const Scenario& scenario, ModelAdapter* adapter, bool parallel_decisions = false);

/// Writes trace.jsonl, metrics.csv and report.txt under config.out_dir.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs every policy on the same scenario and seed and prints a metric x policy grid.
int cmd_compare(const RunConfig& config, const std::vector<PolicyKind>& policies, std::ostream& out, std::ostream& err);

/// Recomputes metrics from a stored trace.
int cmd_report(const std::filesystem::path& trace_path, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace c2c
