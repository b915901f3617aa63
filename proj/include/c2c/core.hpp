#pragma once

#include <c2c/ids.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c2c {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Role { manager, worker };

enum class PolicyKind { no_comm, fixed_steps, c2c_heuristic, c2c_llm };

enum class EvaluatorKind { rule_based, llm };

std::string_view to_string(Role r) noexcept;
std::string_view to_string(PolicyKind p) noexcept;
std::string_view to_string(EvaluatorKind e) noexcept;
std::optional<Role> parse_role(std::string_view s);
std::optional<PolicyKind> parse_policy(std::string_view s);
std::optional<EvaluatorKind> parse_evaluator(std::string_view s);

inline constexpr double kDefaultHoursPerStep = 0.25;
inline constexpr int kDefaultMaxSteps = 160;

struct SimClock {
  int step = 0;
  double hours_per_step = kDefaultHoursPerStep;
  int max_steps = kDefaultMaxSteps;

  [[nodiscard]] double hours() const noexcept { return step * hours_per_step; }
  [[nodiscard]] bool at_cap() const noexcept { return step >= max_steps; }
  void advance();
};

struct AgentProfile {
  AgentId id;
  std::string name;
  Role role = Role::worker;
  std::set<std::string> skills;
  int busy_until_step = 0;

  friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

/// A root task as written in a scenario file.
struct TaskSpec {
  std::string description;
  double estimated_hours = 0.0;
  std::vector<std::string> required_skills;  // ordered; decomposition rotates through it

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// Trigger points of the deterministic heuristic policy.
struct HeuristicThresholds {
  double af_threshold = 0.45;
  int stuck_steps = 4;
  std::size_t blocked_for_meeting = 2;
  double report_milestone = 0.5;
  double report_horizon_hours = 4.0;  // skip the midpoint update when less work than this remains

  friend bool operator==(const HeuristicThresholds&, const HeuristicThresholds&) = default;
};

struct Scenario {
  std::string complexity;   // free label ("simple", "medium", ...)
  std::string team_label;   // e.g. "1M+4W"; always derived from the team
  std::vector<std::string> skill_pool;
  std::vector<AgentProfile> team;
  std::vector<TaskSpec> tasks;
  PolicyKind policy = PolicyKind::c2c_heuristic;
  EvaluatorKind evaluator = EvaluatorKind::rule_based;
  std::uint64_t seed = 0;
  double hours_per_step = kDefaultHoursPerStep;
  int max_steps = kDefaultMaxSteps;
  HeuristicThresholds heuristic;

  [[nodiscard]] const AgentProfile& manager() const;
  [[nodiscard]] std::vector<const AgentProfile*> workers() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  enum class Code {
    no_manager,
    multiple_managers,
    empty_team,
    non_positive_effort,
    no_tasks,
    duplicate_agent,
    empty_skills,
    unknown_skill,
    bad_clock,
  };

  ValidationError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] Code code() const noexcept { return code_; }

 private:
  Code code_;
};

/// Smallest step count whose duration covers `hours`.
int hours_to_steps(double hours, double hours_per_step);

/// Fraction of `required` covered by the agent's skills; 1.0 for an empty requirement.
double skill_match_score(const AgentProfile& agent, const std::set<std::string>& required);

std::string to_lower(std::string_view s);

/// Checks scenario invariants and lower-cases every skill tag.
Scenario validate_scenario(Scenario raw);

/// "1M+4W" style label for a team.
std::string team_label(const std::vector<AgentProfile>& team);

}  // namespace c2c
