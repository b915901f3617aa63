#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <c2c/policy.hpp>

using namespace c2c;

namespace {

AssignmentView task(const std::string& id, double af = 0.30, double worked = 0.0) {
  AssignmentView v;
  v.task = TaskId(id);
  v.description = "work on " + id;
  v.required_skills = {"api"};
  v.estimated_hours = 6.0;
  v.af = af;
  v.hours_worked = worked;
  v.accumulated_hours = worked * af;
  v.progress = v.accumulated_hours / v.estimated_hours;
  v.ready = true;
  return v;
}

PolicyContext worker_ctx(int step) {
  PolicyContext c;
  c.agent = {AgentId("W1"), "Worker 1", Role::worker, {"api"}, 0};
  c.manager = AgentId("M1");
  c.step = step;
  c.team = {{AgentId("M1"), "Manager", Role::manager, {"backend"}, false},
            {AgentId("W1"), "Worker 1", Role::worker, {"api"}, false},
            {AgentId("W2"), "Worker 2", Role::worker, {"testing"}, false},
            {AgentId("W3"), "Worker 3", Role::worker, {"api", "oauth"}, false}};
  return c;
}

IntentionKind decide(const Policy& p, const PolicyContext& c) { return p.decide(c).intention.kind; }

class Canned final : public ModelAdapter {
 public:
  explicit Canned(std::string reply, bool fail = false) : reply_(std::move(reply)), fail_(fail) {}
  std::string complete(std::span<const ChatTurn> turns) override {
    last = turns.back().content;
    if (fail_) throw AdapterError("timeout");
    return reply_;
  }
  std::string last;

 private:
  std::string reply_;
  bool fail_;
};

}  // namespace

TEST_CASE("no_comm always continues") {
  NoCommPolicy p;
  auto c = worker_ctx(16);
  c.assigned = {task("T1.1")};
  c.inbox.push_back(Message{});
  CHECK(decide(p, c) == IntentionKind::continue_task);
}

TEST_CASE("fixed_steps reports on the period and asks for help right after") {
  FixedStepsPolicy p;
  auto c = worker_ctx(16);
  c.assigned = {task("T1.1", 0.5), task("T1.2", 0.3)};
  CHECK(decide(p, c) == IntentionKind::report_progress);
  c.step = 0;
  CHECK(decide(p, c) == IntentionKind::continue_task);
  c.step = 17;
  c.last_intention = IntentionKind::report_progress;
  c.last_intention_step = 16;
  const auto d = p.decide(c);
  CHECK(d.intention.kind == IntentionKind::request_help);
  CHECK(d.intention.task == TaskId("T1.2"));
  c.last_intention_step = 5;
  CHECK(decide(p, c) == IntentionKind::continue_task);
  c.inbox.push_back(Message{});
  CHECK(decide(p, c) == IntentionKind::check_messages);

  auto m = worker_ctx(32);
  m.agent.role = Role::manager;
  CHECK(decide(p, m) == IntentionKind::continue_task);
}

TEST_CASE("heuristic rules fire in priority order") {
  HeuristicPolicy p;
  auto c = worker_ctx(3);
  c.assigned = {task("T1.1", 0.30, 0.0)};
  CHECK(decide(p, c) == IntentionKind::need_clarification);

  c.assigned = {task("T1.1", 0.30, 1.0)};
  c.assigned[0].steps_since_af_gain = 4;
  CHECK(decide(p, c) == IntentionKind::request_help);
  c.assigned[0].awaiting_reply = true;
  CHECK(decide(p, c) == IntentionKind::continue_task);

  c.assigned[0].awaiting_reply = false;
  c.owed_replies.push_back({ThreadId("th1"), MessageType::help_request, AgentId("W2"), TaskId("T1.4"), 2});
  CHECK(decide(p, c) == IntentionKind::check_messages);
  c.owed_replies.clear();
  c.pending_invites.push_back(MeetingId("mt1"));
  CHECK(decide(p, c) == IntentionKind::check_messages);
  c.pending_invites.clear();

  c.assigned = {task("T1.1", 0.60, 1.0)};
  c.assigned[0].blocked_dependents = {AgentId("W2"), AgentId("W3")};
  CHECK(decide(p, c) == IntentionKind::schedule_meeting);
  c.assigned[0].meeting_organized = true;
  CHECK(decide(p, c) == IntentionKind::continue_task);
}

TEST_CASE("heuristic progress reports respect the midpoint horizon") {
  HeuristicPolicy p;
  auto c = worker_ctx(20);
  auto long_task = task("T1.1", 0.5, 6.0);  // half of 6 h done, 6 h left at this alignment
  c.assigned = {long_task};
  CHECK(decide(p, c) == IntentionKind::report_progress);
  c.assigned[0].half_reported = true;
  CHECK(decide(p, c) == IntentionKind::continue_task);

  auto short_task = task("T1.1", 0.9, 2.0);
  short_task.estimated_hours = 3.0;
  short_task.progress = short_task.accumulated_hours / 3.0;
  c.assigned = {short_task};
  CHECK(decide(p, c) == IntentionKind::continue_task);

  auto done = task("T1.1", 0.9, 8.0);
  done.done = true;
  done.ready = false;
  done.progress = 1.0;
  c.assigned = {done};
  CHECK(decide(p, c) == IntentionKind::report_progress);
  c.assigned[0].done_reported = true;
  CHECK(decide(p, c) == IntentionKind::continue_task);
}

TEST_CASE("recipients and channels") {
  auto c = worker_ctx(5);
  const auto t = task("T1.1");
  CHECK(select_recipients(c, IntentionKind::request_help, t) == std::vector<AgentId>{AgentId("W3")});
  c.team[3].busy = true;
  CHECK(select_recipients(c, IntentionKind::request_help, t) == std::vector<AgentId>{AgentId("M1")});
  CHECK(select_recipients(c, IntentionKind::need_clarification, t) == std::vector<AgentId>{AgentId("M1")});
  CHECK(select_recipients(c, IntentionKind::report_progress, t) == std::vector<AgentId>{AgentId("M1")});
  auto blocked = t;
  blocked.blocked_dependents = {AgentId("W3"), AgentId("W2")};
  CHECK(select_recipients(c, IntentionKind::schedule_meeting, blocked) ==
        std::vector<AgentId>{AgentId("M1"), AgentId("W1"), AgentId("W2"), AgentId("W3")});

  CHECK(select_channel(IntentionKind::need_clarification, 500) == Channel::chat);
  CHECK(select_channel(IntentionKind::request_help, 119) == Channel::chat);
  CHECK(select_channel(IntentionKind::request_help, 120) == Channel::email);
  CHECK(select_channel(IntentionKind::report_progress, 5) == Channel::email);
  CHECK(select_channel(IntentionKind::schedule_meeting, 5) == Channel::meeting);
}

TEST_CASE("intention parsing tolerates noise") {
  auto i = parse_intention_response(R"(```json
{"intention": "REQUEST_HELP", "reasoning": "stuck"}
```)");
  REQUIRE(i);
  CHECK(i->kind == IntentionKind::request_help);
  CHECK(i->reasoning == "stuck");
  CHECK(parse_intention_response(R"({"intention": "check_messages"})")->kind == IntentionKind::check_messages);
  CHECK(parse_intention_response(R"({"intention": "CONTINUE_TASK because busy"})")->kind ==
        IntentionKind::continue_task);
  CHECK_FALSE(parse_intention_response(R"({"intention": "DANCE"})"));
  CHECK_FALSE(parse_intention_response("no json"));
  CHECK_FALSE(parse_intention_response(R"({"reasoning": "x"})"));
}

TEST_CASE("the model policy uses the adapter and falls back to the heuristic") {
  auto c = worker_ctx(3);
  c.assigned = {task("T1.1", 0.30, 0.0)};

  Canned good(R"({"intention": "REPORT_PROGRESS", "reasoning": "status"})");
  LlmPolicy llm(good);
  auto d = llm.decide(c);
  CHECK(d.intention.kind == IntentionKind::report_progress);
  CHECK_FALSE(d.warning);
  CHECK(good.last.find("Worker 1") != std::string::npos);
  CHECK(good.last.find("T1.1") != std::string::npos);

  Canned down("", true);
  LlmPolicy broken(down);
  d = broken.decide(c);
  CHECK(d.intention.kind == IntentionKind::need_clarification);
  REQUIRE(d.warning);
  CHECK(d.warning->find("timeout") != std::string::npos);

  const auto comp = broken.compose(c, IntentionKind::need_clarification, c.assigned[0], {AgentId("M1")});
  CHECK(comp.warning);
  CHECK(comp.text == template_message(c, IntentionKind::need_clarification, c.assigned[0], {AgentId("M1")}));

  Canned writer("Could you confirm the token scope for T1.1?");
  LlmPolicy composing(writer);
  CHECK(composing.compose(c, IntentionKind::need_clarification, c.assigned[0], {AgentId("M1")}).text ==
        "Could you confirm the token scope for T1.1?");
}

TEST_CASE("policy factory") {
  CHECK(make_policy(PolicyKind::no_comm, nullptr)->name() == "no_comm");
  CHECK(make_policy(PolicyKind::fixed_steps, nullptr)->name() == "fixed_steps");
  CHECK(make_policy(PolicyKind::c2c_heuristic, nullptr)->name() == "c2c_heuristic");
  CHECK_THROWS_AS(make_policy(PolicyKind::c2c_llm, nullptr), ContractViolation);
  Canned a("{}");
  CHECK(make_policy(PolicyKind::c2c_llm, &a)->name() == "c2c_llm");
}
