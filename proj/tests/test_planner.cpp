#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <c2c/config.hpp>
#include <c2c/planner.hpp>

#include <algorithm>

using namespace c2c;

namespace {

const std::vector<std::string> kPool{"backend", "api", "authentication", "oauth", "testing", "documentation"};

TaskSpec medium() { return {"Integrate an external API", 24.0, kPool}; }

class Canned final : public ModelAdapter {
 public:
  explicit Canned(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(std::span<const ChatTurn> turns) override {
    prompts.push_back(turns.back().content);
    const auto r = replies_.at(std::min(calls_, replies_.size() - 1));
    ++calls_;
    return r;
  }
  std::vector<std::string> prompts;

 private:
  std::vector<std::string> replies_;
  std::size_t calls_ = 0;
};

}  // namespace

TEST_CASE("even decomposition gives one equal part per worker") {
  const auto team = expand_team("1M+4W", kPool);
  const auto plan = decompose_even(medium(), team);
  REQUIRE(plan.subtasks.size() == 4);
  for (const auto& s : plan.subtasks) {
    CHECK(s.estimated_hours == 6.0);
    CHECK(s.dependencies.empty());
  }
  // six skills over four parts: parts 1 and 2 take two skills each
  CHECK(plan.subtasks[0].required_skills == std::vector<std::string>{"backend", "testing"});
  CHECK(plan.subtasks[1].required_skills == std::vector<std::string>{"api", "documentation"});
  CHECK(plan.subtasks[2].required_skills == std::vector<std::string>{"authentication"});
  CHECK(plan.total_hours() == 24.0);
  std::set<AgentId> suggested;
  for (const auto& s : plan.subtasks) suggested.insert(*s.suggested_assignee);
  CHECK(suggested.size() == 4);
  CHECK_NOTHROW(validate_plan(plan, medium(), team));

  const auto big = decompose_even(medium(), expand_team("1M+16W", kPool));
  CHECK(big.subtasks.size() == 16);
  CHECK(big.subtasks[7].required_skills == std::vector<std::string>{"api"});
}

TEST_CASE("plan validation rules") {
  const auto team = expand_team("1M+4W", kPool);
  auto plan = decompose_even(medium(), team);
  auto bad = plan;
  bad.subtasks[0].estimated_hours = 0;
  CHECK_THROWS_AS(validate_plan(bad, medium(), team), PlanError);
  bad = plan;
  bad.subtasks[0].estimated_hours = 20;
  CHECK_THROWS_AS(validate_plan(bad, medium(), team), PlanError);
  bad = plan;
  bad.subtasks[0].dependencies = {1};
  bad.subtasks[1].dependencies = {0};
  CHECK_THROWS_AS(validate_plan(bad, medium(), team), PlanError);
  bad = plan;
  bad.subtasks[2].dependencies = {9};
  CHECK_THROWS_AS(validate_plan(bad, medium(), team), PlanError);
  bad = plan;
  bad.subtasks[0].suggested_assignee = AgentId("W99");
  CHECK_THROWS_AS(validate_plan(bad, medium(), team), PlanError);
  bad = plan;
  bad.subtasks[0].estimated_hours = 7.5;  // total 25.5, within 20%
  CHECK_NOTHROW(validate_plan(bad, medium(), team));
}

TEST_CASE("model plans parse with names or ids and fall back after two rejections") {
  const auto team = expand_team("1M+4W", kPool);
  const std::string good = R"(Here you go:
{"subtasks": [
  {"description": "client", "estimated_hours": 12, "required_skills": ["API"], "suggested_assignee": "Worker 2", "dependencies": []},
  {"description": "docs", "estimated_hours": 12, "required_skills": ["documentation"], "suggested_assignee": "W1", "dependencies": [0]}
 ], "decomposition_rationale": "two halves"})";
  const auto plan = parse_plan_response(good, team);
  REQUIRE(plan.subtasks.size() == 2);
  CHECK(plan.subtasks[0].suggested_assignee == AgentId("W2"));
  CHECK(plan.subtasks[0].required_skills == std::vector<std::string>{"api"});
  CHECK(plan.subtasks[1].dependencies == std::vector<std::size_t>{0});
  CHECK(plan.rationale == "two halves");

  Canned ok({good});
  auto out = decompose_llm(medium(), team, ok);
  CHECK_FALSE(out.fell_back);
  CHECK(out.warnings.empty());
  CHECK(ok.prompts.front().find("Create 4 subtasks") != std::string::npos);

  Canned retry({"not json", good});
  out = decompose_llm(medium(), team, retry);
  CHECK_FALSE(out.fell_back);
  CHECK(out.warnings.size() == 1);

  Canned junk({R"({"subtasks": [{"description": "all", "estimated_hours": 2}]})"});
  out = decompose_llm(medium(), team, junk);
  CHECK(out.fell_back);
  CHECK(out.plan.subtasks.size() == 4);
}

TEST_CASE("assignment spreads load within one subtask for every suggestion pattern") {
  const auto team = expand_team("1M+4W", kPool);
  std::vector<AgentId> workers;
  for (const auto& a : team) {
    if (a.role == Role::worker) workers.push_back(a.id);
  }
  const TaskSpec task{"t", 16.0, kPool};
  int patterns = 0;
  for (int code = 0; code < 65536; ++code) {
    DecompositionPlan plan;
    int c = code;
    for (int i = 0; i < 8; ++i) {
      PlannedSubtask s;
      s.estimated_hours = 2.0;
      s.required_skills = {kPool[static_cast<std::size_t>(i) % kPool.size()]};
      s.suggested_assignee = workers[static_cast<std::size_t>(c % 4)];
      c /= 4;
      plan.subtasks.push_back(std::move(s));
    }
    TaskGraph g;
    g.add_root(TaskId("T1"), task);
    const auto ids = g.add_subtasks(TaskId("T1"), plan.specs());
    const auto out = assign(plan, ids, g, team);
    std::map<AgentId, std::size_t> load;
    for (const auto& id : ids) {
      const auto& n = g.node(id);
      REQUIRE(n.assignee);
      ++load[*n.assignee];
    }
    std::size_t lo = 99, hi = 0;
    for (const auto& w : workers) {
      lo = std::min(lo, load[w]);
      hi = std::max(hi, load[w]);
    }
    REQUIRE(hi - lo <= 1);
    ++patterns;
  }
  CHECK(patterns == 65536);
}

TEST_CASE("assignment honours earlier load and prefers skill matches") {
  const auto team = expand_team("1M+4W", kPool);
  const TaskSpec task{"t", 8.0, kPool};
  auto plan = decompose_even(task, team);
  TaskGraph g;
  g.add_root(TaskId("T1"), task);
  const auto ids = g.add_subtasks(TaskId("T1"), plan.specs());
  std::map<AgentId, std::size_t> earlier{{AgentId("W1"), 1}, {AgentId("W2"), 1}};
  const auto out = assign(plan, ids, g, team, earlier);
  std::map<AgentId, std::size_t> total = earlier;
  for (const auto& [a, tasks] : out.by_agent) total[a] += tasks.size();
  for (const auto& a : team) {
    if (a.role == Role::worker) CHECK(total[a.id] >= 1);
  }
  for (const auto& id : ids) {
    const auto& n = g.node(id);
    const auto& who = *std::find_if(team.begin(), team.end(), [&](const AgentProfile& a) { return a.id == *n.assignee; });
    if (out.warnings.empty()) CHECK(skill_match_score(who, n.required_skills) > 0.0);
  }
}
