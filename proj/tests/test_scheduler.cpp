#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace c2c;
using namespace c2c::testing;

namespace {

/// One blocking subtask with every other subtask depending on it.
class FanOutPlanner final : public Planner {
 public:
  PlanOutcome plan(const TaskSpec& task, std::span<const AgentProfile> team) override {
    DecompositionPlan p;
    std::size_t workers = 0;
    for (const auto& a : team) workers += a.role == Role::worker;
    for (std::size_t i = 0; i < workers; ++i) {
      PlannedSubtask s;
      s.description = i == 0 ? "shared foundation" : "feature " + std::to_string(i);
      s.estimated_hours = task.estimated_hours / static_cast<double>(workers);
      s.required_skills = {task.required_skills[i % task.required_skills.size()]};
      s.suggested_assignee = AgentId("W" + std::to_string(i + 1));
      if (i > 0) s.dependencies = {0};
      p.subtasks.push_back(std::move(s));
    }
    return {std::move(p), {}, false};
  }
};

std::vector<const TraceEvent*> of_kind(const TraceLog& t, TraceKind k) {
  std::vector<const TraceEvent*> out;
  for (const auto& e : t.events()) {
    if (e.kind == k) out.push_back(&e);
  }
  return out;
}

double root_hours(const SimResult& r) {
  return r.world.completion_step.at(TaskId("T1")) * r.world.clock.hours_per_step;
}

}  // namespace

TEST_CASE("no_comm baselines finish on the expected step") {
  NoCommPolicy p;
  CHECK(root_hours(simulate_policy(make_scenario("simple"), p)) == 7.0);
  CHECK(root_hours(simulate_policy(make_scenario("medium"), p)) == 20.25);
  CHECK(root_hours(simulate_policy(make_scenario("complex"), p)) == 33.75);
}

TEST_CASE("step zero is the manager's decomposition") {
  NoCommPolicy p;
  const auto r = simulate_policy(make_scenario("medium"), p);
  const auto actions = of_kind(r.world.trace, TraceKind::action);
  REQUIRE(actions.size() >= 5);
  CHECK(actions[0]->step == 0);
  CHECK(actions[0]->payload["agent"] == "M1");
  CHECK(actions[0]->payload["note"] == "decompose");
  CHECK(actions[0]->payload["subtasks"].size() == 4);
  for (int i = 1; i < 5; ++i) {
    CHECK(actions[static_cast<std::size_t>(i)]->step == 0);
    CHECK(actions[static_cast<std::size_t>(i)]->payload["action"] == "idle");
  }
  CHECK(actions[5]->step == 1);
  const auto inits = of_kind(r.world.trace, TraceKind::af_update);
  CHECK(inits.size() == 4);
  for (const auto* e : inits) {
    CHECK(e->step == 0);
    CHECK(e->payload["new"] == 0.30);
    CHECK(e->payload["cause"] == "init");
  }
}

TEST_CASE("messages are read only on later steps") {
  HeuristicPolicy p;
  const auto r = simulate_policy(make_scenario("medium", "1M+4W", PolicyKind::c2c_heuristic), p);
  std::map<std::string, int> sent;
  int delivered = 0;
  for (const auto& e : r.world.trace.events()) {
    if (e.kind == TraceKind::message_sent) sent[e.payload["message_id"]] = e.step;
    if (e.kind == TraceKind::message_delivered) {
      CHECK(e.step == sent.at(e.payload["message_id"]) + 1);
      ++delivered;
    }
  }
  CHECK(delivered > 0);
  CHECK(r.world.communication_hours > 0.0);
}

TEST_CASE("resolved help and clarification raise alignment by the rule deltas") {
  HeuristicPolicy p;
  const auto r = simulate_policy(make_scenario("medium", "1M+4W", PolicyKind::c2c_heuristic), p);
  int gains = 0;
  for (const auto* e : of_kind(r.world.trace, TraceKind::af_update)) {
    if (e->payload["cause"] == "init") continue;
    const double d = e->payload["delta"];
    CHECK((d == kHelpResolvedDelta || d == kClarificationResolvedDelta || d == 0.0 || d == kMeetingDelta));
    gains += d > 0.0;
  }
  CHECK(gains > 0);
  CHECK(r.all_done);
}

TEST_CASE("blocked teammates trigger a meeting that lifts every attendee") {
  HeuristicPolicy p;
  FanOutPlanner planner;
  const auto s = make_scenario("medium", "1M+4W", PolicyKind::c2c_heuristic);
  const auto r = simulate_policy(s, p, &planner);
  REQUIRE(r.world.meetings.size() >= 1);
  const auto& m = r.world.meetings.begin()->second;
  CHECK(m.organizer == AgentId("W1"));
  CHECK(m.status == MeetingStatus::done);
  CHECK(m.start_step >= m.invite_step + 2);
  CHECK(m.attendees.size() >= 2);

  int starts = 0;
  for (const auto* e : of_kind(r.world.trace, TraceKind::message_sent)) {
    if (e->payload["type"] == "MEETING_START") {
      ++starts;
      CHECK(e->payload["cost_h"] == doctest::Approx(communication_cost(Channel::meeting, 0,
                                                                       static_cast<int>(m.attendees.size()))));
    }
    if (e->payload["type"] == "MEETING_INVITE") CHECK(e->payload["cost_h"] == 0.0);
  }
  CHECK(starts == 1);

  int attended = 0;
  for (const auto* e : of_kind(r.world.trace, TraceKind::action)) {
    if (e->payload["action"] == "meeting") ++attended;
  }
  CHECK(attended == static_cast<int>(m.attendees.size()) * m.duration_steps);

  int meeting_gains = 0;
  for (const auto* e : of_kind(r.world.trace, TraceKind::af_update)) {
    if (e->payload["cause"] == m.id.str()) {
      ++meeting_gains;
      CHECK(e->payload["delta"] == kMeetingDelta);
    }
  }
  CHECK(meeting_gains >= 1);
  CHECK(r.all_done);
}

TEST_CASE("the step cap stops an unfinished run") {
  NoCommPolicy p;
  auto s = make_scenario("complex");
  s.max_steps = 4;
  Engine e(s, {&p, nullptr, EvaluatorKind::rule_based, nullptr, false});
  for (int i = 0; i < 4; ++i) e.step();
  CHECK(e.finished());
  CHECK_THROWS_AS(e.step(), ContractViolation);
  const auto r = std::move(e).run();
  CHECK_FALSE(r.all_done);
  CHECK(r.steps_run == 4);
}

TEST_CASE("messages still in flight at the end are reported") {
  FixedStepsPolicy p;
  auto s = make_scenario("complex", "1M+4W", PolicyKind::fixed_steps);
  s.max_steps = 17;
  const auto r = simulate_policy(s, p);
  int undelivered = 0;
  for (const auto* e : of_kind(r.world.trace, TraceKind::warning)) undelivered += e->payload["code"] == "undelivered";
  CHECK(undelivered == static_cast<int>(r.world.buffer.pending().size()));
}

TEST_CASE("engine options are checked") {
  const auto s = make_scenario("simple");
  CHECK_THROWS_AS(Engine(s, {}), ContractViolation);
  NoCommPolicy p;
  CHECK_THROWS_AS(Engine(s, {&p, nullptr, EvaluatorKind::llm, nullptr, false}), ContractViolation);
}

TEST_CASE("two roots are decomposed together and balanced") {
  NoCommPolicy p;
  auto s = make_scenario("medium", "1M+8W");
  s.tasks.push_back(appendix_task("complex"));
  s.skill_pool.clear();
  s = validate_scenario(s);
  const auto r = simulate_policy(s, p);
  CHECK(r.all_done);
  std::map<AgentId, int> load;
  for (const auto& [id, n] : r.world.graph.nodes()) {
    if (n.assignee) ++load[*n.assignee];
  }
  CHECK(load.size() == 8);
  for (const auto& [a, n] : load) CHECK(n == 2);
}
