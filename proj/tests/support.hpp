#pragma once

#include <c2c/commands.hpp>
#include <c2c/config.hpp>
#include <c2c/metrics.hpp>
#include <c2c/scheduler.hpp>

#include <random>
#include <string>

namespace c2c::testing {

inline TaskSpec appendix_task(const std::string& complexity) {
  if (complexity == "simple") {
    return {"Fix five independent bugs across modules: login validation, data parsing, UI rendering glitches, API "
            "timeout handling, and a database connection leak. No cross-dependencies.",
            8.0,
            {"backend", "frontend", "database", "api", "testing"}};
  }
  if (complexity == "medium") {
    return {"Integrate an external API with authentication, including token management and error/latency handling; "
            "deliver minimal usage docs.",
            24.0,
            {"backend", "api", "authentication", "oauth", "testing", "documentation"}};
  }
  return {"Build a user authentication service covering registration, login, password reset, OAuth 2.0 sign-in, JWT "
          "issuance/refresh, session management, and security hardening.",
          40.0,
          {"backend", "security", "database", "oauth", "authentication", "frontend", "testing"}};
}

inline Scenario make_scenario(const std::string& complexity, const std::string& team = "1M+4W",
                              PolicyKind policy = PolicyKind::no_comm, std::uint64_t seed = 7) {
  Scenario s;
  s.complexity = complexity;
  s.tasks = {appendix_task(complexity)};
  s.skill_pool = s.tasks.front().required_skills;
  s.team = expand_team(team, s.skill_pool);
  s.policy = policy;
  s.seed = seed;
  return validate_scenario(std::move(s));
}

inline SimResult simulate_policy(const Scenario& s, const Policy& policy, Planner* planner = nullptr,
                                 bool parallel = false) {
  EngineOptions o;
  o.policy = &policy;
  o.planner = planner;
  o.parallel_decisions = parallel;
  return run(s, o);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

/// Picks intentions at random from (seed, agent, step), so message schedules vary per seed.
class ScriptedPolicy final : public Policy {
 public:
  explicit ScriptedPolicy(std::uint64_t seed) : seed_(seed) {}
  std::string_view name() const override { return "scripted"; }

  Decision decide(const PolicyContext& ctx) const override {
    std::mt19937_64 rng(mix(mix(seed_, fnv1a64(ctx.agent.id.str())), static_cast<std::uint64_t>(ctx.step)));
    const int roll = static_cast<int>(rng() % 100);
    IntentionKind k = IntentionKind::continue_task;
    if (roll < 25) k = IntentionKind::check_messages;
    else if (roll < 35) k = IntentionKind::request_help;
    else if (roll < 42) k = IntentionKind::need_clarification;
    else if (roll < 50) k = IntentionKind::report_progress;
    else if (roll < 54) k = IntentionKind::schedule_meeting;
    return {{k, "scripted", std::nullopt}, std::nullopt};
  }

  bool reply_resolves(const PolicyContext& ctx, const Thread& th) const override {
    return mix(mix(seed_, fnv1a64(th.id.str())), static_cast<std::uint64_t>(ctx.step)) % 3 == 0;
  }

 private:
  std::uint64_t seed_;
};

/// Random subtasks with random backward dependencies; hours sum to the estimate.
class RandomDagPlanner final : public Planner {
 public:
  explicit RandomDagPlanner(std::uint64_t seed) : rng_(seed) {}

  PlanOutcome plan(const TaskSpec& task, std::span<const AgentProfile> team) override {
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_real_distribution<double> weight(0.2, 1.0);
    const int n = count(rng_);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) total += (x = weight(rng_));
    DecompositionPlan plan;
    std::vector<const AgentProfile*> workers;
    for (const auto& a : team) {
      if (a.role == Role::worker) workers.push_back(&a);
    }
    for (int i = 0; i < n; ++i) {
      PlannedSubtask st;
      st.description = "part " + std::to_string(i + 1);
      st.estimated_hours = task.estimated_hours * w[static_cast<std::size_t>(i)] / total;
      st.required_skills = {task.required_skills[static_cast<std::size_t>(i) % task.required_skills.size()]};
      st.suggested_assignee = workers[rng_() % workers.size()]->id;
      for (int j = 0; j < i; ++j) {
        if (rng_() % 4 == 0) st.dependencies.push_back(static_cast<std::size_t>(j));
      }
      plan.subtasks.push_back(std::move(st));
    }
    return {std::move(plan), {}, false};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace c2c::testing
