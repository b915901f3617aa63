#pragma once

#include <c2c/adapter.hpp>
#include <c2c/planner.hpp>
#include <c2c/policy.hpp>
#include <c2c/world.hpp>

#include <memory>
#include <optional>
#include <vector>

namespace c2c {

struct EngineOptions {
  const Policy* policy = nullptr;   // required
  Planner* planner = nullptr;       // defaults to an even split
  EvaluatorKind evaluator = EvaluatorKind::rule_based;
  ModelAdapter* evaluator_adapter = nullptr;  // required when evaluator == llm
  bool parallel_decisions = false;  // fan out policy calls within a step
};

struct SimResult {
  WorldState world;
  bool all_done = false;
  int steps_run = 0;
};

/// Synchronous time-stepped engine. Each step runs, in order:
///   1. deliver messages due this step (meeting starts lock attendees)
///   2. build contexts for every agent without an action in flight
///   3. ask the policy for an intention per idle agent
///   4. resolve intentions to actions, ascending agent id
///   5. execute one step of every action; completed communications are enqueued
///   6. apply alignment changes from replies delivered and meetings finished this step
///   7. stage meeting starts for the next step
///   8. advance the clock
class Engine {
 public:
  Engine(const Scenario& scenario, EngineOptions options);

  void step();
  /// Steps until every root task is done or the step cap is reached.
  SimResult run() &&;

  [[nodiscard]] const WorldState& world() const noexcept { return world_; }
  [[nodiscard]] bool finished() const;

  /// Turns a decided intention into a concrete action for `ctx.agent`.
  ActiveAction resolve_intention(const Intention& intention, const PolicyContext& ctx);

 private:
  struct PendingEvaluation {
    AgentId agent;
    TaskId task;
    std::string cause;  // message or meeting id
    std::optional<MessageId> reply;
    std::optional<ThreadId> thread;
    bool meeting = false;
  };

  void deliver_phase(int step);
  void decide_and_resolve_phase(int step);
  void execute_phase(int step);
  void evaluate_phase(int step);
  void stage_phase(int step);

  nlohmann::ordered_json plan_all(int step);
  void complete_action(const AgentId& agent, ActiveAction& act, int step);
  const Message& send(Message m, int step);
  ActiveAction idle_action(int step, std::string note = {}) const;
  ActiveAction work_or_idle(const PolicyContext& ctx, int step) const;
  void warn(int step, const std::string& code, const std::string& text);
  std::vector<MessageId> mark_read(const AgentId& agent);

  WorldState world_;
  EngineOptions options_;
  std::vector<TaskSpec> roots_;
  std::unique_ptr<Planner> owned_planner_;
  std::vector<PendingEvaluation> pending_evals_;
  std::vector<MeetingId> finished_meetings_;
};

SimResult run(const Scenario& scenario, EngineOptions options);

}  // namespace c2c
