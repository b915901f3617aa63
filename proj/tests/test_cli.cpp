#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace c2c;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("c2c_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig config_for(const std::string& scenario, const fs::path& out, std::optional<PolicyKind> policy) {
  RunConfig c;
  c.scenario_path = "scenarios/" + scenario + ".yaml";
  c.out_dir = out;
  c.policy = policy;
  return c;
}

int shell(const std::string& args) {
  const int status = std::system((std::string(C2C_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run writes the trace, metrics and report") {
  const auto dir = scratch("run");
  std::ostringstream out, err;
  CHECK(cmd_run(config_for("simple", dir, PolicyKind::no_comm), out, err) == kExitOk);
  CHECK(err.str().empty());
  const auto csv = slurp(dir / "metrics.csv");
  CHECK(csv.starts_with(std::string(kMetricsCsvHeader) + "\n1M+4W/no_comm,simple,100.0,7.00,0.00,0.300,"));
  CHECK(slurp(dir / "report.txt") == out.str());
  CHECK_FALSE(slurp(dir / "trace.jsonl").empty());

  SUBCASE("report recomputes the same numbers from the trace") {
    std::ostringstream again;
    CHECK(cmd_report(dir / "trace.jsonl", config_for("simple", dir, PolicyKind::no_comm), again, err) == kExitOk);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("an unfinished run exits with the incomplete code") {
  auto c = config_for("complex", scratch("capped"), PolicyKind::c2c_heuristic);
  c.max_steps = 4;
  std::ostringstream out, err;
  CHECK(cmd_run(c, out, err) == kExitIncomplete);
  CHECK(fs::exists(c.out_dir / "trace.jsonl"));
}

TEST_CASE("model-backed modes need a reachable endpoint") {
  std::ostringstream out, err;
  auto c = config_for("simple", scratch("llm"), PolicyKind::c2c_llm);
  CHECK(cmd_run(c, out, err) == kExitAdapter);
  CHECK_FALSE(fs::exists(c.out_dir / "trace.jsonl"));

  c.adapter.endpoint = "http://127.0.0.1:1";
  c.adapter.timeout_seconds = 2;
  CHECK(cmd_run(c, out, err) == kExitAdapter);

  c.policy = PolicyKind::c2c_heuristic;
  c.evaluator = EvaluatorKind::llm;
  CHECK(cmd_run(c, out, err) == kExitAdapter);
}

TEST_CASE("rule-based modes ignore the endpoint entirely") {
  std::ostringstream out, err;
  auto c = config_for("simple", scratch("offline"), PolicyKind::c2c_heuristic);
  c.adapter.endpoint = "http://127.0.0.1:1";
  CHECK(cmd_run(c, out, err) == kExitOk);
}

TEST_CASE("compare needs two policies and is repeatable") {
  std::ostringstream out, err;
  const auto dir = scratch("compare");
  CHECK(cmd_compare(config_for("medium", dir, std::nullopt), {PolicyKind::no_comm}, out, err) == kExitUsage);

  const std::vector<PolicyKind> all{PolicyKind::no_comm, PolicyKind::fixed_steps, PolicyKind::c2c_heuristic};
  CHECK(cmd_compare(config_for("medium", dir, std::nullopt), all, out, err) == kExitOk);
  const auto first = slurp(dir / "compare.csv");
  std::ostringstream out2;
  CHECK(cmd_compare(config_for("medium", dir, std::nullopt), all, out2, err) == kExitOk);
  CHECK(slurp(dir / "compare.csv") == first);
  CHECK(out2.str() == out.str());
  CHECK(std::count(first.begin(), first.end(), '\n') == 4);
}

TEST_CASE("bad inputs are usage errors") {
  std::ostringstream out, err;
  CHECK(cmd_run(config_for("does_not_exist", scratch("missing"), std::nullopt), out, err) == kExitUsage);
  CHECK_FALSE(err.str().empty());
  CHECK(cmd_report(scratch("none") / "trace.jsonl", config_for("simple", scratch("none"), std::nullopt), out, err) ==
        kExitUsage);
}

TEST_CASE("the command-line front end maps onto the same exit codes") {
  const auto dir = scratch("binary");
  CHECK(shell("run --scenario scenarios/simple.yaml --policy no_comm --out " + dir.string()) == kExitOk);
  CHECK(fs::exists(dir / "trace.jsonl"));
  CHECK(shell("report --scenario scenarios/simple.yaml --policy no_comm --trace " + (dir / "trace.jsonl").string()) ==
        kExitOk);
  CHECK(shell("run --scenario scenarios/simple.yaml --max-steps 3 --out " + dir.string()) == kExitIncomplete);
  CHECK(shell("run --scenario scenarios/simple.yaml --policy c2c_llm --out " + dir.string()) == kExitAdapter);
  CHECK(shell("run --scenario scenarios/simple.yaml --policy telepathy") == kExitUsage);
  CHECK(shell("compare --scenario scenarios/simple.yaml --policy no_comm --out " + dir.string()) == kExitUsage);
  CHECK(shell("run") == kExitUsage);
  CHECK(shell("--help") == kExitOk);
}
