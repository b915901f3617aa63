#pragma once

#include <c2c/adapter.hpp>
#include <c2c/core.hpp>
#include <c2c/task_graph.hpp>

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace c2c {

struct PlannedSubtask {
  std::string description;
  double estimated_hours = 0.0;
  std::vector<std::string> required_skills;
  std::optional<AgentId> suggested_assignee;
  std::vector<std::size_t> dependencies;
};

struct DecompositionPlan {
  std::vector<PlannedSubtask> subtasks;
  std::string rationale;

  [[nodiscard]] double total_hours() const;
  [[nodiscard]] std::vector<SubtaskSpec> specs() const;
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative tolerance between a plan's summed hours and the task estimate.
inline constexpr double kPlanHoursTolerance = 0.20;

/// One subtask per worker, equal hours, skills rotated through the task's list,
/// no dependencies, each suggested to a distinct best-matching worker.
DecompositionPlan decompose_even(const TaskSpec& task, std::span<const AgentProfile> team);

/// Throws PlanError describing the first violated rule.
void validate_plan(const DecompositionPlan& plan, const TaskSpec& task, std::span<const AgentProfile> team);

/// Parses the model's decomposition JSON. Assignees may be given by id or name.
DecompositionPlan parse_plan_response(std::string_view text, std::span<const AgentProfile> team);

struct PlanOutcome {
  DecompositionPlan plan;
  std::vector<std::string> warnings;
  bool fell_back = false;
};

/// Model-backed decomposition: one retry on an invalid plan, then decompose_even.
PlanOutcome decompose_llm(const TaskSpec& task, std::span<const AgentProfile> team, ModelAdapter& adapter);

struct AssignmentOutcome {
  std::map<AgentId, std::vector<TaskId>> by_agent;
  std::vector<std::string> warnings;
};

/// Assigns every subtask in `subtask_ids` (parallel to plan.subtasks) and
/// records the assignee on the graph. `existing_load` carries counts from
/// earlier roots so multi-task scenarios spread evenly.
AssignmentOutcome assign(const DecompositionPlan& plan, std::span<const TaskId> subtask_ids, TaskGraph& graph,
                         std::span<const AgentProfile> team, std::map<AgentId, std::size_t> existing_load = {});

/// Decomposition strategy used by the engine at step 0.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual PlanOutcome plan(const TaskSpec& task, std::span<const AgentProfile> team) = 0;
};

class EvenPlanner final : public Planner {
 public:
  PlanOutcome plan(const TaskSpec& task, std::span<const AgentProfile> team) override {
    return {decompose_even(task, team), {}, false};
  }
};

class LlmPlanner final : public Planner {
 public:
  explicit LlmPlanner(ModelAdapter& adapter) : adapter_(adapter) {}
  PlanOutcome plan(const TaskSpec& task, std::span<const AgentProfile> team) override {
    return decompose_llm(task, team, adapter_);
  }

 private:
  ModelAdapter& adapter_;
};

}  // namespace c2c
