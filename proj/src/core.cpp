#include <c2c/core.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace c2c {

std::string_view to_string(Role r) noexcept {
  return r == Role::manager ? "manager" : "worker";
}

std::string_view to_string(PolicyKind p) noexcept {
  switch (p) {
    case PolicyKind::no_comm: return "no_comm";
    case PolicyKind::fixed_steps: return "fixed_steps";
    case PolicyKind::c2c_heuristic: return "c2c_heuristic";
    case PolicyKind::c2c_llm: return "c2c_llm";
  }
  return "unknown";
}

std::string_view to_string(EvaluatorKind e) noexcept {
  return e == EvaluatorKind::rule_based ? "rule_based" : "llm";
}

std::optional<Role> parse_role(std::string_view s) {
  const auto v = to_lower(s);
  if (v == "manager") return Role::manager;
  if (v == "worker") return Role::worker;
  return std::nullopt;
}

std::optional<PolicyKind> parse_policy(std::string_view s) {
  const auto v = to_lower(s);
  for (auto p : {PolicyKind::no_comm, PolicyKind::fixed_steps, PolicyKind::c2c_heuristic,
                 PolicyKind::c2c_llm}) {
    if (v == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<EvaluatorKind> parse_evaluator(std::string_view s) {
  const auto v = to_lower(s);
  if (v == "rule_based") return EvaluatorKind::rule_based;
  if (v == "llm") return EvaluatorKind::llm;
  return std::nullopt;
}

void SimClock::advance() {
  if (step >= max_steps) throw ContractViolation("clock already at max_steps");
  ++step;
}

const AgentProfile& Scenario::manager() const {
  auto it = std::find_if(team.begin(), team.end(),
                         [](const AgentProfile& a) { return a.role == Role::manager; });
  if (it == team.end()) throw ValidationError(ValidationError::Code::no_manager, "no manager");
  return *it;
}

std::vector<const AgentProfile*> Scenario::workers() const {
  std::vector<const AgentProfile*> out;
  for (const auto& a : team) {
    if (a.role == Role::worker) out.push_back(&a);
  }
  return out;
}

int hours_to_steps(double hours, double hours_per_step) {
  if (!(hours >= 0.0) || !std::isfinite(hours)) {
    throw ContractViolation("hours_to_steps: hours must be a finite non-negative value");
  }
  if (!(hours_per_step > 0.0)) throw ContractViolation("hours_to_steps: hours_per_step must be positive");
  if (hours == 0.0) return 0;
  auto n = static_cast<long long>(std::ceil(hours / hours_per_step));
  // settle on the smallest n with n * hours_per_step >= hours as evaluated in floating point
  while (n > 1 && static_cast<double>(n - 1) * hours_per_step >= hours) --n;
  while (static_cast<double>(n) * hours_per_step < hours) ++n;
  return static_cast<int>(std::max<long long>(n, 1));
}

double skill_match_score(const AgentProfile& agent, const std::set<std::string>& required) {
  if (required.empty()) return 1.0;
  std::size_t hits = 0;
  for (const auto& s : required) hits += agent.skills.count(s);
  return static_cast<double>(hits) / static_cast<double>(required.size());
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Scenario validate_scenario(Scenario raw) {
  using Code = ValidationError::Code;
  if (raw.team.empty()) throw ValidationError(Code::empty_team, "empty team");
  if (!(raw.hours_per_step > 0.0) || raw.max_steps <= 0) {
    throw ValidationError(Code::bad_clock, "hours_per_step and max_steps must be positive");
  }

  std::size_t managers = 0;
  std::set<AgentId> seen;
  for (auto& agent : raw.team) {
    if (!seen.insert(agent.id).second) {
      throw ValidationError(Code::duplicate_agent, "duplicate agent id " + agent.id.str());
    }
    if (agent.role == Role::manager) ++managers;
    std::set<std::string> lowered;
    for (const auto& s : agent.skills) lowered.insert(to_lower(s));
    agent.skills = std::move(lowered);
    if (agent.skills.empty()) {
      throw ValidationError(Code::empty_skills, "agent " + agent.id.str() + " has no skills");
    }
  }
  if (managers == 0) throw ValidationError(Code::no_manager, "no manager");
  if (managers > 1) throw ValidationError(Code::multiple_managers, "multiple managers");
  if (managers == raw.team.size()) throw ValidationError(Code::empty_team, "team has no workers");

  if (raw.tasks.empty()) throw ValidationError(Code::no_tasks, "no tasks");
  for (auto& task : raw.tasks) {
    if (!(task.estimated_hours > 0.0) || !std::isfinite(task.estimated_hours)) {
      throw ValidationError(Code::non_positive_effort, "non-positive effort");
    }
    for (auto& s : task.required_skills) s = to_lower(s);
  }

  for (auto& s : raw.skill_pool) s = to_lower(s);
  if (!raw.skill_pool.empty()) {
    const std::set<std::string> pool(raw.skill_pool.begin(), raw.skill_pool.end());
    for (const auto& agent : raw.team) {
      for (const auto& s : agent.skills) {
        if (!pool.count(s)) {
          throw ValidationError(Code::unknown_skill,
                                "agent " + agent.id.str() + " has skill '" + s + "' outside the skill pool");
        }
      }
    }
    for (const auto& task : raw.tasks) {
      for (const auto& s : task.required_skills) {
        if (!pool.count(s)) {
          throw ValidationError(Code::unknown_skill, "task requires skill '" + s + "' outside the skill pool");
        }
      }
    }
  }

  std::stable_sort(raw.team.begin(), raw.team.end(),
                   [](const AgentProfile& a, const AgentProfile& b) { return a.id < b.id; });
  raw.team_label = team_label(raw.team);
  return raw;
}

std::string team_label(const std::vector<AgentProfile>& team) {
  std::size_t m = 0;
  std::size_t w = 0;
  for (const auto& a : team) (a.role == Role::manager ? m : w)++;
  return std::to_string(m) + "M+" + std::to_string(w) + "W";
}

}  // namespace c2c
