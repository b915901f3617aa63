#include <c2c/commands.hpp>

#include <c2c/config.hpp>

#include <fstream>
#include <memory>
#include <ostream>

namespace c2c {

namespace {

struct Wiring {
  std::unique_ptr<HttpChatAdapter> adapter;
};

/// Builds and probes the HTTP adapter when the scenario needs one.
std::optional<int> connect(const Scenario& scenario, const RunConfig& config, Wiring& w, std::ostream& err) {
  if (!needs_adapter(scenario)) return std::nullopt;
  if (config.adapter.endpoint.empty()) {
    err << "error: policy " << to_string(scenario.policy) << " with evaluator " << to_string(scenario.evaluator)
        << " needs --endpoint\n";
    return kExitAdapter;
  }
  try {
    w.adapter = std::make_unique<HttpChatAdapter>(config.adapter);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAdapter;
  }
  if (!w.adapter->reachable()) {
    err << "error: model endpoint " << config.adapter.endpoint << " is unreachable\n";
    return kExitAdapter;
  }
  return std::nullopt;
}

bool write_file(const std::filesystem::path& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

std::optional<Scenario> load(const RunConfig& config, std::ostream& err) {
  try {
    return apply_overrides(parse_scenario(config.scenario_path), config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

Scenario apply_overrides(Scenario s, const RunConfig& c) {
  if (c.policy) s.policy = *c.policy;
  if (c.evaluator) s.evaluator = *c.evaluator;
  if (c.seed) s.seed = *c.seed;
  if (c.max_steps) s.max_steps = *c.max_steps;
  return validate_scenario(std::move(s));
}

bool needs_adapter(const Scenario& s) noexcept {
  return s.policy == PolicyKind::c2c_llm || s.evaluator == EvaluatorKind::llm;
}

std::optional<double> baseline_time(const Scenario& scenario) {
  Scenario base = scenario;
  base.policy = PolicyKind::no_comm;
  base.evaluator = EvaluatorKind::rule_based;
  NoCommPolicy no_comm;
  EvenPlanner even;
  const auto r = run(base, {&no_comm, &even, EvaluatorKind::rule_based, nullptr, false});
  const auto m = compute_metrics(r.world.trace, base);
  if (m.roots_done != m.roots_total) return std::nullopt;
  return m.avg_completion_time;
}

RunOutcome simulate(const Scenario& scenario, ModelAdapter* adapter, bool parallel_decisions) {
  if (needs_adapter(scenario) && !adapter) throw ContractViolation("scenario needs a model adapter");
  auto policy = make_policy(scenario.policy, adapter, scenario.heuristic);
  std::unique_ptr<Planner> planner;
  if (scenario.policy == PolicyKind::c2c_llm) {
    planner = std::make_unique<LlmPlanner>(*adapter);
  } else {
    planner = std::make_unique<EvenPlanner>();
  }
  EngineOptions opts;
  opts.policy = policy.get();
  opts.planner = planner.get();
  opts.evaluator = scenario.evaluator;
  opts.evaluator_adapter = adapter;
  opts.parallel_decisions = parallel_decisions;

  RunOutcome out;
  out.result = run(scenario, opts);
  out.metrics = compute_metrics(out.result.world.trace, scenario, baseline_time(scenario));
  return out;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto scenario = load(config, err);
  if (!scenario) return kExitUsage;
  Wiring w;
  if (auto code = connect(*scenario, config, w, err)) return *code;

  RunOutcome r;
  try {
    r = simulate(*scenario, w.adapter.get(), config.parallel_decisions);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    err << "error: cannot create " << config.out_dir.string() << ": " << ec.message() << "\n";
    return kExitUsage;
  }
  const auto label = config_label(*scenario);
  const auto report = format_report(label, scenario->complexity, r.metrics);
  const bool ok = write_file(config.out_dir / "trace.jsonl", r.result.world.trace.to_jsonl(), err) &&
                  write_file(config.out_dir / "metrics.csv",
                             std::string(kMetricsCsvHeader) + "\n" +
                                 metrics_csv_row(label, scenario->complexity, r.metrics) + "\n",
                             err) &&
                  write_file(config.out_dir / "report.txt", report, err);
  if (!ok) return kExitUsage;
  out << report;
  return r.metrics.roots_done == r.metrics.roots_total ? kExitOk : kExitIncomplete;
}

int cmd_compare(const RunConfig& config, const std::vector<PolicyKind>& policies, std::ostream& out,
                std::ostream& err) {
  if (policies.size() < 2) {
    err << "error: compare needs at least two policies\n";
    return kExitUsage;
  }
  auto scenario = load(config, err);
  if (!scenario) return kExitUsage;

  std::vector<std::pair<std::string, MetricsReport>> columns;
  std::string csv = std::string(kMetricsCsvHeader) + "\n";
  bool complete = true;
  for (const auto p : policies) {
    Scenario s = *scenario;
    s.policy = p;
    Wiring w;
    if (auto code = connect(s, config, w, err)) return *code;
    RunOutcome r;
    try {
      r = simulate(s, w.adapter.get(), config.parallel_decisions);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    complete = complete && r.metrics.roots_done == r.metrics.roots_total;
    csv += metrics_csv_row(config_label(s), s.complexity, r.metrics) + "\n";
    columns.emplace_back(std::string(to_string(p)), std::move(r.metrics));
  }
  const auto table = format_comparison(scenario->complexity, columns);
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec || !write_file(config.out_dir / "compare.csv", csv, err) ||
      !write_file(config.out_dir / "compare.txt", table, err)) {
    if (ec) err << "error: cannot create " << config.out_dir.string() << "\n";
    return kExitUsage;
  }
  out << table;
  return complete ? kExitOk : kExitIncomplete;
}

int cmd_report(const std::filesystem::path& trace_path, const RunConfig& config, std::ostream& out,
               std::ostream& err) {
  auto scenario = load(config, err);
  if (!scenario) return kExitUsage;
  std::ifstream in(trace_path);
  if (!in) {
    err << "error: cannot open " << trace_path.string() << "\n";
    return kExitUsage;
  }
  try {
    const auto trace = TraceLog::read_jsonl(in);
    const auto m = compute_metrics(trace, *scenario, baseline_time(*scenario));
    out << format_report(config_label(*scenario), scenario->complexity, m);
    return m.roots_done == m.roots_total ? kExitOk : kExitIncomplete;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace c2c
