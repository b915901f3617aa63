#pragma once

#include <c2c/adapter.hpp>
#include <c2c/communication.hpp>
#include <c2c/task_graph.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace c2c {

inline constexpr double kInitialAlignment = 0.30;
inline constexpr double kMinAlignment = 0.01;
inline constexpr double kMaxAlignment = 1.00;
// Normalized evaluator deltas. The lower bound keeps a single decrease from
// the initial 0.30 above the floor.
inline constexpr double kMinDelta = -0.29;
inline constexpr double kMaxDelta = 0.50;

// Default impacts per interaction outcome.
inline constexpr double kHelpResolvedDelta = 0.15;
inline constexpr double kClarificationResolvedDelta = 0.10;
inline constexpr double kMeetingDelta = 0.27;
inline constexpr double kProgressUpdateDelta = 0.00;

[[nodiscard]] double clamp_alignment(double af) noexcept;
[[nodiscard]] double clamp_delta(double delta) noexcept;

class AlignmentError : public std::runtime_error {
 public:
  enum class Code { already_initialized, unknown_assignment };

  AlignmentError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct AlignmentRecord {
  int step = 0;
  AgentId agent;
  TaskId task;
  double old_af = 0.0;
  double delta = 0.0;
  double new_af = 0.0;
  std::string cause;  // message or meeting id
};

using AssignmentKey = std::pair<AgentId, TaskId>;

class AlignmentState {
 public:
  void init(const AgentId& agent, const TaskId& task);

  /// new = min(1.00, max(0.01, old + delta)); appends to history.
  double apply_delta(const AgentId& agent, const TaskId& task, double delta, int step = 0, std::string cause = {});

  [[nodiscard]] double value(const AgentId& agent, const TaskId& task) const;
  [[nodiscard]] bool contains(const AgentId& agent, const TaskId& task) const;
  [[nodiscard]] const std::map<AssignmentKey, double>& values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<AlignmentRecord>& history() const noexcept { return history_; }

  /// Rebuilds a state from initialized pairs and a recorded history.
  static AlignmentState replay(const std::vector<AssignmentKey>& pairs, const std::vector<AlignmentRecord>& history);

 private:
  std::map<AssignmentKey, double> values_;
  std::vector<AlignmentRecord> history_;
};

/// hours x af
[[nodiscard]] double effective_progress(double hours, double af);

struct DeltaEvaluation {
  double delta = 0.0;
  std::string reasoning;
};

/// Rule-based impact of a delivered reply on the requester. Only replies that
/// resolve a help or clarification request move alignment.
[[nodiscard]] DeltaEvaluation rule_based_delta(MessageType request_type, bool resolved);

/// Rule-based impact of attending a completed meeting.
[[nodiscard]] DeltaEvaluation meeting_delta();

/// Parses an evaluator response and recomputes delta = clamp(new_af) - old_af,
/// capped to [kMinDelta, kMaxDelta]. Throws AdapterError when malformed.
[[nodiscard]] DeltaEvaluation normalize_evaluation(double old_af, std::string_view response_text);

struct ReplyEvaluationInput {
  const TaskNode* task = nullptr;
  double current_af = kInitialAlignment;
  std::optional<Message> original_request;
  Message reply;
  MessageType request_type = MessageType::help_request;
  bool resolved = true;
};

struct EvaluationOutcome {
  DeltaEvaluation evaluation;
  std::optional<std::string> warning;  // set when the rule-based fallback was used
};

/// Asks the model adapter to judge a reply; falls back to rule_based_delta on
/// transport or parse failure.
[[nodiscard]] EvaluationOutcome evaluate_reply_delta(const ReplyEvaluationInput& input, ModelAdapter& adapter);

}  // namespace c2c
