#include <c2c/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

template <class T, class Parse>
std::optional<T> parse_or_throw(const std::string& text, Parse parse, const char* what) {
  if (text.empty()) return std::nullopt;
  auto v = parse(text);
  if (!v) throw CLI::ValidationError(what, "unknown value '" + text + "'");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent collaboration simulator"};
  app.require_subcommand(1);

  c2c::RunConfig config;
  std::string policy_text;
  std::string evaluator_text;
  std::vector<std::string> policy_list;
  std::string trace_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", config.scenario_path, "scenario YAML file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--evaluator", evaluator_text, "rule_based | llm");
    cmd->add_option("--seed", config.seed, "random seed override");
    cmd->add_option("--out", config.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--max-steps", config.max_steps, "step cap override")->check(CLI::PositiveNumber);
    cmd->add_option("--endpoint", config.adapter.endpoint, "chat-completion base URL");
    cmd->add_option("--model", config.adapter.model, "model name")->capture_default_str();
    cmd->add_option("--temperature", config.adapter.temperature, "sampling temperature")->capture_default_str();
    cmd->add_flag("--parallel", config.parallel_decisions, "run per-step policy calls concurrently");
  };

  auto* run = app.add_subcommand("run", "run one scenario");
  add_common(run);
  run->add_option("--policy", policy_text, "no_comm | fixed_steps | c2c_heuristic | c2c_llm");

  auto* compare = app.add_subcommand("compare", "run several policies on one scenario");
  add_common(compare);
  compare->add_option("--policy", policy_list, "policies to compare (at least two)")->delimiter(',')->required();

  auto* report = app.add_subcommand("report", "recompute metrics from a trace");
  add_common(report);
  report->add_option("--trace", trace_path, "trace.jsonl to read")->required()->check(CLI::ExistingFile);
  report->add_option("--policy", policy_text, "policy label for the report");

  try {
    app.parse(argc, argv);
    config.policy = parse_or_throw<c2c::PolicyKind>(policy_text, c2c::parse_policy, "--policy");
    config.evaluator = parse_or_throw<c2c::EvaluatorKind>(evaluator_text, c2c::parse_evaluator, "--evaluator");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : c2c::kExitUsage;
  }

  if (*run) return c2c::cmd_run(config, std::cout, std::cerr);
  if (*report) return c2c::cmd_report(trace_path, config, std::cout, std::cerr);

  std::vector<c2c::PolicyKind> policies;
  for (const auto& p : policy_list) {
    auto kind = c2c::parse_policy(p);
    if (!kind) {
      std::cerr << "error: unknown policy '" << p << "'\n";
      return c2c::kExitUsage;
    }
    policies.push_back(*kind);
  }
  return c2c::cmd_compare(config, policies, std::cout, std::cerr);
}
