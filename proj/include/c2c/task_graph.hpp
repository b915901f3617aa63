#pragma once

#include <c2c/core.hpp>

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace c2c {

enum class TaskStatus { pending, ready, in_progress, done };

std::string_view to_string(TaskStatus s) noexcept;

struct TaskNode {
  TaskId id;
  std::optional<TaskId> parent;
  std::string description;
  double estimated_hours = 0.0;
  std::set<std::string> required_skills;
  std::set<TaskId> dependencies;
  std::vector<TaskId> children;
  std::optional<AgentId> assignee;
  double accumulated_effective_hours = 0.0;
  TaskStatus status = TaskStatus::pending;

  [[nodiscard]] bool is_leaf() const noexcept { return children.empty(); }
  [[nodiscard]] bool done() const noexcept { return status == TaskStatus::done; }
  /// min(1, accumulated / estimated)
  [[nodiscard]] double progress() const noexcept;
};

/// Subtask as produced by a decomposition; dependencies index into the sibling list.
struct SubtaskSpec {
  std::string description;
  double estimated_hours = 0.0;
  std::vector<std::string> required_skills;
  std::vector<std::size_t> dependencies;
};

class TaskGraphError : public std::runtime_error {
 public:
  enum class Code { unknown_task, duplicate_task, already_decomposed, cycle, bad_dependency,
                    no_subtasks, already_done, blocked, not_leaf, negative_work };

  TaskGraphError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct WorkOutcome {
  double credited = 0.0;                 // effective hours added
  std::vector<TaskId> completed;         // the task, then any ancestors completed by it
};

/// Relative slack when comparing accumulated effective hours against an estimate.
inline constexpr double kCompletionTolerance = 1e-9;

class TaskGraph {
 public:
  const TaskNode& add_root(const TaskId& id, const TaskSpec& spec);

  /// Inserts subtasks "<parent>.1", "<parent>.2", ... and returns their ids in input order.
  std::vector<TaskId> add_subtasks(const TaskId& parent, std::span<const SubtaskSpec> specs);

  /// Non-done leaves whose dependencies are all done.
  [[nodiscard]] std::set<TaskId> ready_tasks() const;

  /// Effort-weighted mean of the children's progress.
  [[nodiscard]] double parent_progress(const TaskId& parent) const;

  WorkOutcome record_work(const TaskId& task, double effective_hours);

  void set_assignee(const TaskId& task, const AgentId& agent);

  [[nodiscard]] bool contains(const TaskId& id) const { return nodes_.count(id) != 0; }
  [[nodiscard]] const TaskNode& node(const TaskId& id) const;
  [[nodiscard]] const std::map<TaskId, TaskNode>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<TaskId>& roots() const noexcept { return roots_; }
  [[nodiscard]] bool all_roots_done() const;
  [[nodiscard]] bool is_ready(const TaskId& id) const;

 private:
  TaskNode& mutable_node(const TaskId& id);
  void refresh_status(TaskNode& n);

  std::map<TaskId, TaskNode> nodes_;
  std::vector<TaskId> roots_;
};

}  // namespace c2c
