#include <c2c/planner.hpp>

#include <c2c/prompts.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace c2c {

double DecompositionPlan::total_hours() const {
  double total = 0.0;
  for (const auto& s : subtasks) total += s.estimated_hours;
  return total;
}

std::vector<SubtaskSpec> DecompositionPlan::specs() const {
  std::vector<SubtaskSpec> out;
  out.reserve(subtasks.size());
  for (const auto& s : subtasks) out.push_back({s.description, s.estimated_hours, s.required_skills, s.dependencies});
  return out;
}

namespace {

std::vector<const AgentProfile*> workers_of(std::span<const AgentProfile> team) {
  std::vector<const AgentProfile*> out;
  for (const auto& a : team) {
    if (a.role == Role::worker) out.push_back(&a);
  }
  std::sort(out.begin(), out.end(), [](const AgentProfile* a, const AgentProfile* b) { return a->id < b->id; });
  return out;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

DecompositionPlan decompose_even(const TaskSpec& task, std::span<const AgentProfile> team) {
  const auto workers = workers_of(team);
  if (workers.empty()) throw PlanError("empty team");
  const std::size_t n = workers.size();
  const std::size_t k = task.required_skills.size();

  DecompositionPlan plan;
  plan.rationale = "even split: one independent subtask per worker";
  std::map<AgentId, std::size_t> suggested_load;
  for (std::size_t i = 0; i < n; ++i) {
    PlannedSubtask s;
    s.estimated_hours = task.estimated_hours / static_cast<double>(n);
    if (k >= n) {
      for (std::size_t j = i; j < k; j += n) s.required_skills.push_back(task.required_skills[j]);
    } else if (k > 0) {
      s.required_skills.push_back(task.required_skills[i % k]);
    }
    std::string focus;
    for (const auto& sk : s.required_skills) focus += (focus.empty() ? "" : ", ") + sk;
    s.description = "Part " + std::to_string(i + 1) + " of " + std::to_string(n) + ": " + task.description +
                    (focus.empty() ? "" : " Focus: " + focus + ".");

    // least-loaded first, then best skill match, then lowest id
    const AgentProfile* best = nullptr;
    const auto req = as_set(s.required_skills);
    for (const auto* w : workers) {
      if (!best) { best = w; continue; }
      const auto lw = suggested_load[w->id];
      const auto lb = suggested_load[best->id];
      if (lw < lb || (lw == lb && skill_match_score(*w, req) > skill_match_score(*best, req))) best = w;
    }
    s.suggested_assignee = best->id;
    ++suggested_load[best->id];
    plan.subtasks.push_back(std::move(s));
  }
  return plan;
}

void validate_plan(const DecompositionPlan& plan, const TaskSpec& task, std::span<const AgentProfile> team) {
  if (plan.subtasks.empty()) throw PlanError("plan has no subtasks");
  for (std::size_t i = 0; i < plan.subtasks.size(); ++i) {
    const auto& s = plan.subtasks[i];
    if (!(s.estimated_hours > 0.0) || !std::isfinite(s.estimated_hours)) {
      throw PlanError("subtask " + std::to_string(i) + " has non-positive hours");
    }
    for (auto d : s.dependencies) {
      if (d >= plan.subtasks.size() || d == i) {
        throw PlanError("subtask " + std::to_string(i) + " has bad dependency index " + std::to_string(d));
      }
    }
    if (s.suggested_assignee) {
      const bool known = std::any_of(team.begin(), team.end(),
                                     [&](const AgentProfile& a) { return a.id == *s.suggested_assignee; });
      if (!known) throw PlanError("unknown assignee " + s.suggested_assignee->str());
    }
  }
  const double total = plan.total_hours();
  if (std::fabs(total - task.estimated_hours) > kPlanHoursTolerance * task.estimated_hours) {
    throw PlanError("subtask hours sum to " + fixed(total, 2) + ", outside 20% of " + fixed(task.estimated_hours, 2));
  }
  // acyclicity, checked on a scratch graph
  TaskGraph scratch;
  scratch.add_root(TaskId("scratch"), task);
  const auto specs = plan.specs();
  try {
    scratch.add_subtasks(TaskId("scratch"), specs);
  } catch (const TaskGraphError& e) {
    throw PlanError(e.what());
  }
}

DecompositionPlan parse_plan_response(std::string_view text, std::span<const AgentProfile> team) {
  auto obj = extract_json_object(text);
  if (!obj) throw PlanError("decomposition response contains no JSON object");
  const auto subtasks = obj->find("subtasks");
  if (subtasks == obj->end() || !subtasks->is_array()) throw PlanError("decomposition response lacks subtasks");

  DecompositionPlan plan;
  if (auto r = obj->find("decomposition_rationale"); r != obj->end() && r->is_string()) {
    plan.rationale = r->get<std::string>();
  }
  for (const auto& item : *subtasks) {
    if (!item.is_object()) throw PlanError("subtask entry is not an object");
    PlannedSubtask s;
    s.description = item.value("description", std::string{});
    const auto hours = item.find("estimated_hours");
    if (hours == item.end() || !hours->is_number()) throw PlanError("subtask lacks numeric estimated_hours");
    s.estimated_hours = hours->get<double>();
    if (auto sk = item.find("required_skills"); sk != item.end() && sk->is_array()) {
      for (const auto& v : *sk) {
        if (v.is_string()) s.required_skills.push_back(to_lower(v.get<std::string>()));
      }
    }
    if (auto deps = item.find("dependencies"); deps != item.end() && deps->is_array()) {
      for (const auto& d : *deps) {
        if (!d.is_number_integer() || d.get<long long>() < 0) throw PlanError("dependency is not an index");
        s.dependencies.push_back(static_cast<std::size_t>(d.get<long long>()));
      }
    }
    if (auto who = item.find("suggested_assignee"); who != item.end() && who->is_string()) {
      const auto name = to_lower(who->get<std::string>());
      auto it = std::find_if(team.begin(), team.end(), [&](const AgentProfile& a) {
        return to_lower(a.id.str()) == name || to_lower(a.name) == name;
      });
      s.suggested_assignee = it != team.end() ? it->id : AgentId(who->get<std::string>());
    }
    plan.subtasks.push_back(std::move(s));
  }
  return plan;
}

PlanOutcome decompose_llm(const TaskSpec& task, std::span<const AgentProfile> team, ModelAdapter& adapter) {
  DecompositionPromptInput in;
  in.description = task.description;
  in.estimated_hours = task.estimated_hours;
  in.required_skills = task.required_skills;
  for (const auto& a : team) {
    in.team.push_back({a.name.empty() ? a.id.str() : a.name, std::string(to_string(a.role)),
                       {a.skills.begin(), a.skills.end()}});
    if (a.role == Role::manager) in.manager_name = a.name.empty() ? a.id.str() : a.name;
  }
  in.subtask_count = static_cast<int>(workers_of(team).size());
  const ChatTurn turn{"user", render_decomposition_prompt(in)};

  PlanOutcome out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      auto plan = parse_plan_response(adapter.complete({&turn, 1}), team);
      validate_plan(plan, task, team);
      out.plan = std::move(plan);
      return out;
    } catch (const std::exception& e) {
      out.warnings.push_back("decomposition attempt " + std::to_string(attempt + 1) + " rejected: " + e.what());
    }
  }
  out.plan = decompose_even(task, team);
  out.fell_back = true;
  out.warnings.push_back("decomposition fell back to even split");
  return out;
}

AssignmentOutcome assign(const DecompositionPlan& plan, std::span<const TaskId> subtask_ids, TaskGraph& graph,
                         std::span<const AgentProfile> team, std::map<AgentId, std::size_t> existing_load) {
  if (subtask_ids.size() != plan.subtasks.size()) throw ContractViolation("assign: plan and ids differ in length");
  const auto workers = workers_of(team);
  if (workers.empty()) throw PlanError("empty team");

  AssignmentOutcome out;
  std::size_t total = plan.subtasks.size();
  for (const auto& [a, c] : existing_load) total += c;
  const std::size_t hi = (total + workers.size() - 1) / workers.size();
  const std::size_t lo = total / workers.size();
  auto load = [&](const AgentId& id) { return existing_load[id]; };

  for (std::size_t i = 0; i < plan.subtasks.size(); ++i) {
    const auto& s = plan.subtasks[i];
    const auto req = as_set(s.required_skills);
    const std::size_t remaining = plan.subtasks.size() - i;
    std::size_t deficit = 0;
    for (const auto* w : workers) deficit += lo > load(w->id) ? lo - load(w->id) : 0;
    // keeps the final spread within one subtask
    auto eligible = [&](const AgentProfile& a) {
      if (a.role == Role::manager) return true;
      return load(a.id) < hi && (remaining > deficit || load(a.id) < lo);
    };
    const AgentProfile* chosen = nullptr;

    if (s.suggested_assignee) {
      auto it = std::find_if(team.begin(), team.end(),
                             [&](const AgentProfile& a) { return a.id == *s.suggested_assignee; });
      if (it != team.end() && skill_match_score(*it, req) > 0.0 && eligible(*it)) chosen = &*it;
    }
    if (!chosen) {
      // best match among eligible workers; lowest id breaks ties
      double best_score = 0.0;
      for (const auto* w : workers) {
        if (!eligible(*w)) continue;
        const double score = skill_match_score(*w, req);
        if (score > best_score) {
          chosen = w;
          best_score = score;
        }
      }
    }
    if (!chosen) {
      for (const auto* w : workers) {
        if (eligible(*w) && (!chosen || load(w->id) < load(chosen->id))) chosen = w;
      }
      out.warnings.push_back("subtask " + subtask_ids[i].str() + " matches no free worker's skills; assigned to " +
                             chosen->id.str());
    }
    graph.set_assignee(subtask_ids[i], chosen->id);
    ++existing_load[chosen->id];
    out.by_agent[chosen->id].push_back(subtask_ids[i]);
  }
  return out;
}

}  // namespace c2c
