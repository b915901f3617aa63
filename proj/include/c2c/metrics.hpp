#pragma once

#include <c2c/core.hpp>
#include <c2c/trace.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace c2c {

/// cell (from, to) = messages from `from` delivered to `to`.
struct Heatmap {
  std::vector<std::string> agents;  // natural order
  std::map<std::string, std::map<std::string, int>> counts;

  [[nodiscard]] int at(const std::string& from, const std::string& to) const;
  [[nodiscard]] int row_total(const std::string& from) const;
  [[nodiscard]] int column_total(const std::string& to) const;
};

struct Latency {
  double mean_steps = 0.0;
  int samples = 0;
};

struct Distributions {
  std::map<std::string, int> type_counts;     // excludes RESPONSE and MEETING_START
  std::map<std::string, int> channel_counts;  // same messages as type_counts
  std::map<std::string, double> type_shares;
  std::map<std::string, double> channel_shares;
  std::map<std::string, Latency> latency_by_type;     // keyed by request type
  std::map<std::string, Latency> latency_by_channel;  // keyed by request channel
};

struct MetricsReport {
  int roots_total = 0;
  int roots_done = 0;
  double completion_rate = 0.0;      // percent
  double avg_completion_time = 0.0;  // hours, over completed roots
  double communication_cost = 0.0;   // hours
  double alignment_score = 0.0;      // mean AF over (agent, task, step)
  double efficiency = 0.0;
  std::optional<double> speedup;
  Heatmap heatmap;
  Distributions distributions;
};

/// baseline / measured; throws ContractViolation unless both are positive.
[[nodiscard]] double speedup(double baseline_hours, double measured_hours);

Heatmap heatmap(const TraceLog& trace);
Distributions distributions(const TraceLog& trace);

/// Pure function of the trace. Throws std::invalid_argument("empty trace").
MetricsReport compute_metrics(const TraceLog& trace, const Scenario& scenario,
                              std::optional<double> baseline_time = std::nullopt);

inline constexpr const char* kMetricsCsvHeader =
    "config,complexity,completion_rate,avg_time_h,comm_cost_h,alignment,efficiency,speedup";

/// "1M+4W/no_comm"
std::string config_label(const Scenario& scenario);
std::string metrics_csv_row(const std::string& config, const std::string& complexity, const MetricsReport& m);
std::string format_report(const std::string& config, const std::string& complexity, const MetricsReport& m);
/// Metric x policy grid; speedup is relative to the first column.
std::string format_comparison(const std::string& complexity,
                              const std::vector<std::pair<std::string, MetricsReport>>& columns);

}  // namespace c2c
