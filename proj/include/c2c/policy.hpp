#pragma once

#include <c2c/adapter.hpp>
#include <c2c/world.hpp>

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace c2c {

struct AssignmentView {
  TaskId task;
  std::string description;
  std::set<std::string> required_skills;
  double estimated_hours = 0.0;
  double accumulated_hours = 0.0;
  double progress = 0.0;
  double af = kInitialAlignment;
  double hours_worked = 0.0;
  double hours_since_af_gain = 0.0;
  int steps_since_af_gain = 0;
  bool ready = false;
  bool done = false;
  bool half_reported = false;
  bool done_reported = false;
  bool awaiting_reply = false;       // an outgoing request about this task is still open
  bool meeting_organized = false;    // this agent already called a meeting about it
  std::vector<AgentId> blocked_dependents;
};

struct TeamView {
  AgentId id;
  std::string name;
  Role role = Role::worker;
  std::set<std::string> skills;
  bool busy = false;
};

struct OwedReply {
  ThreadId thread;
  MessageType root_type = MessageType::help_request;
  AgentId requester;
  std::optional<TaskId> task;
  int last_delivery_step = 0;
};

/// What an agent can see at the start of its decision. Nothing in here was
/// delivered after the current step.
struct PolicyContext {
  AgentProfile agent;
  AgentId manager;
  int step = 0;
  double hours_per_step = kDefaultHoursPerStep;
  std::uint64_t seed = 0;
  std::vector<AssignmentView> assigned;  // ascending task id
  std::vector<Message> inbox;            // delivered, unread, in delivery order
  std::vector<OwedReply> owed_replies;   // oldest first
  std::vector<MeetingId> pending_invites;
  bool has_meeting_start = false;
  std::vector<TeamView> team;
  std::optional<IntentionKind> last_intention;
  int last_intention_step = -1;
  std::string last_action;

  /// Lowest-id assigned task that is ready to be worked.
  [[nodiscard]] const AssignmentView* active_assignment() const;
  [[nodiscard]] const AssignmentView* find(const TaskId& task) const;
  [[nodiscard]] bool has_unread() const noexcept { return !inbox.empty(); }
};

PolicyContext build_context(const WorldState& world, const AgentId& agent);

struct Decision {
  Intention intention;
  std::optional<std::string> warning;
};

struct Composition {
  std::string text;
  std::optional<std::string> warning;
};

/// Deterministic message body for a communicating intention.
std::string template_message(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about,
                             const std::vector<AgentId>& recipients);
std::string template_reply(const PolicyContext& ctx, const OwedReply& owed);

class Policy {
 public:
  virtual ~Policy() = default;
  [[nodiscard]] virtual std::string_view name() const = 0;
  [[nodiscard]] virtual Decision decide(const PolicyContext& ctx) const = 0;
  /// Whether a reply this agent writes closes the thread.
  [[nodiscard]] virtual bool reply_resolves(const PolicyContext&, const Thread&) const { return true; }
  [[nodiscard]] virtual Composition compose(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about,
                                            const std::vector<AgentId>& recipients) const;
  [[nodiscard]] virtual Composition compose_reply(const PolicyContext& ctx, const OwedReply& owed) const;
};

class NoCommPolicy final : public Policy {
 public:
  [[nodiscard]] std::string_view name() const override { return "no_comm"; }
  [[nodiscard]] Decision decide(const PolicyContext& ctx) const override;
};

class FixedStepsPolicy final : public Policy {
 public:
  explicit FixedStepsPolicy(int period = 16) : period_(period) {}
  [[nodiscard]] std::string_view name() const override { return "fixed_steps"; }
  [[nodiscard]] Decision decide(const PolicyContext& ctx) const override;
  [[nodiscard]] int period() const noexcept { return period_; }

 private:
  int period_;
};

class HeuristicPolicy final : public Policy {
 public:
  explicit HeuristicPolicy(HeuristicThresholds t = {}) : t_(t) {}
  [[nodiscard]] std::string_view name() const override { return "c2c_heuristic"; }
  [[nodiscard]] Decision decide(const PolicyContext& ctx) const override;
  [[nodiscard]] const HeuristicThresholds& thresholds() const noexcept { return t_; }

 private:
  HeuristicThresholds t_;
};

/// Intentions and message bodies come from the external model; any failure
/// falls back to the heuristic for that decision.
class LlmPolicy final : public Policy {
 public:
  explicit LlmPolicy(ModelAdapter& adapter, HeuristicThresholds t = {}) : adapter_(adapter), fallback_(t) {}
  [[nodiscard]] std::string_view name() const override { return "c2c_llm"; }
  [[nodiscard]] Decision decide(const PolicyContext& ctx) const override;
  [[nodiscard]] Composition compose(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about,
                                    const std::vector<AgentId>& recipients) const override;

 private:
  ModelAdapter& adapter_;
  HeuristicPolicy fallback_;
};

/// Parses {"intention", "reasoning"} from model text.
std::optional<Intention> parse_intention_response(std::string_view text);

std::string format_tasks_for_prompt(const PolicyContext& ctx);
std::string format_message_info(const PolicyContext& ctx);

std::vector<AgentId> select_recipients(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about);
Channel select_channel(IntentionKind kind, std::size_t content_words);

inline constexpr std::size_t kShortMessageWords = 120;

std::unique_ptr<Policy> make_policy(PolicyKind kind, ModelAdapter* adapter, HeuristicThresholds t = {});

}  // namespace c2c
