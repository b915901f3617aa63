#include <c2c/task_graph.hpp>

#include <algorithm>
#include <numeric>

namespace c2c {

std::string_view to_string(TaskStatus s) noexcept {
  switch (s) {
    case TaskStatus::pending: return "pending";
    case TaskStatus::ready: return "ready";
    case TaskStatus::in_progress: return "in_progress";
    case TaskStatus::done: return "done";
  }
  return "unknown";
}

double TaskNode::progress() const noexcept {
  if (estimated_hours <= 0.0) return done() ? 1.0 : 0.0;
  return std::min(1.0, accumulated_effective_hours / estimated_hours);
}

const TaskNode& TaskGraph::add_root(const TaskId& id, const TaskSpec& spec) {
  if (nodes_.count(id)) throw TaskGraphError(TaskGraphError::Code::duplicate_task, "duplicate task " + id.str());
  TaskNode n;
  n.id = id;
  n.description = spec.description;
  n.estimated_hours = spec.estimated_hours;
  n.required_skills = {spec.required_skills.begin(), spec.required_skills.end()};
  n.status = TaskStatus::ready;
  roots_.push_back(id);
  return nodes_.emplace(id, std::move(n)).first->second;
}

std::vector<TaskId> TaskGraph::add_subtasks(const TaskId& parent, std::span<const SubtaskSpec> specs) {
  auto& p = mutable_node(parent);
  if (!p.children.empty()) {
    throw TaskGraphError(TaskGraphError::Code::already_decomposed, "task " + parent.str() + " already has subtasks");
  }
  if (p.done()) throw TaskGraphError(TaskGraphError::Code::already_done, "task already done");
  if (specs.empty()) throw TaskGraphError(TaskGraphError::Code::no_subtasks, "no subtasks");

  std::vector<TaskId> ids;
  ids.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ids.emplace_back(parent.str() + "." + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (auto d : specs[i].dependencies) {
      if (d >= specs.size()) throw TaskGraphError(TaskGraphError::Code::bad_dependency, "bad dependency");
      if (d == i) throw TaskGraphError(TaskGraphError::Code::cycle, "cycle detected");
    }
  }

  std::map<TaskId, TaskNode> staged;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    TaskNode n;
    n.id = ids[i];
    n.parent = parent;
    n.description = specs[i].description;
    n.estimated_hours = specs[i].estimated_hours;
    for (const auto& s : specs[i].required_skills) n.required_skills.insert(to_lower(s));
    for (auto d : specs[i].dependencies) n.dependencies.insert(ids[d]);
    staged.emplace(ids[i], std::move(n));
  }

  // Kahn's algorithm over the staged siblings only; deps are sibling-local.
  std::map<TaskId, std::size_t> indegree;
  for (const auto& [id, n] : staged) indegree[id] = n.dependencies.size();
  std::vector<TaskId> frontier;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) frontier.push_back(id);
  }
  std::size_t visited = 0;
  while (!frontier.empty()) {
    auto cur = frontier.back();
    frontier.pop_back();
    ++visited;
    for (const auto& [id, n] : staged) {
      if (n.dependencies.count(cur) && --indegree[id] == 0) frontier.push_back(id);
    }
  }
  if (visited != staged.size()) throw TaskGraphError(TaskGraphError::Code::cycle, "cycle detected");

  for (auto& [id, n] : staged) nodes_.emplace(id, std::move(n));
  p.children = ids;
  p.status = TaskStatus::pending;
  for (const auto& id : ids) refresh_status(nodes_.at(id));
  return ids;
}

std::set<TaskId> TaskGraph::ready_tasks() const {
  std::set<TaskId> out;
  for (const auto& [id, n] : nodes_) {
    if (is_ready(id)) out.insert(id);
  }
  return out;
}

bool TaskGraph::is_ready(const TaskId& id) const {
  const auto& n = node(id);
  if (n.done() || !n.is_leaf()) return false;
  return std::all_of(n.dependencies.begin(), n.dependencies.end(),
                     [&](const TaskId& d) { return node(d).done(); });
}

double TaskGraph::parent_progress(const TaskId& parent) const {
  const auto& p = node(parent);
  if (p.children.empty()) throw TaskGraphError(TaskGraphError::Code::no_subtasks, "no subtasks");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& c : p.children) {
    const auto& child = node(c);
    const double progress = child.is_leaf() ? child.progress() : parent_progress(c);
    weighted += child.estimated_hours * progress;
    total += child.estimated_hours;
  }
  return total > 0.0 ? weighted / total : 0.0;
}

WorkOutcome TaskGraph::record_work(const TaskId& task, double effective_hours) {
  if (!(effective_hours >= 0.0)) {
    throw TaskGraphError(TaskGraphError::Code::negative_work, "effective hours must be non-negative");
  }
  auto& n = mutable_node(task);
  if (n.done()) throw TaskGraphError(TaskGraphError::Code::already_done, "task already done");
  if (!n.is_leaf()) throw TaskGraphError(TaskGraphError::Code::not_leaf, "work is only recorded on leaf tasks");
  if (!is_ready(task)) throw TaskGraphError(TaskGraphError::Code::blocked, "task " + task.str() + " is blocked");

  WorkOutcome out;
  out.credited = effective_hours;
  n.accumulated_effective_hours += effective_hours;
  n.status = TaskStatus::in_progress;
  if (n.accumulated_effective_hours >= n.estimated_hours * (1.0 - kCompletionTolerance)) {
    n.status = TaskStatus::done;
    out.completed.push_back(n.id);

    // roll completion upward; a parent closes only once every child is done
    auto parent = n.parent;
    while (parent) {
      auto& p = mutable_node(*parent);
      const bool all_done = std::all_of(p.children.begin(), p.children.end(),
                                        [&](const TaskId& c) { return node(c).done(); });
      if (!all_done) break;
      p.status = TaskStatus::done;
      out.completed.push_back(p.id);
      parent = p.parent;
    }
    if (n.parent) {
      for (const auto& sibling : node(*n.parent).children) refresh_status(mutable_node(sibling));
    }
  }
  return out;
}

void TaskGraph::set_assignee(const TaskId& task, const AgentId& agent) {
  mutable_node(task).assignee = agent;
}

const TaskNode& TaskGraph::node(const TaskId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw TaskGraphError(TaskGraphError::Code::unknown_task, "unknown task " + id.str());
  return it->second;
}

TaskNode& TaskGraph::mutable_node(const TaskId& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw TaskGraphError(TaskGraphError::Code::unknown_task, "unknown task " + id.str());
  return it->second;
}

bool TaskGraph::all_roots_done() const {
  return std::all_of(roots_.begin(), roots_.end(), [&](const TaskId& r) { return node(r).done(); });
}

void TaskGraph::refresh_status(TaskNode& n) {
  if (n.done() || n.status == TaskStatus::in_progress) return;
  n.status = is_ready(n.id) ? TaskStatus::ready : TaskStatus::pending;
}

}  // namespace c2c
