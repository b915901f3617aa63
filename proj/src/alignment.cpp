#include <c2c/alignment.hpp>

#include <c2c/prompts.hpp>

#include <algorithm>
#include <cmath>

namespace c2c {

double clamp_alignment(double af) noexcept { return std::min(kMaxAlignment, std::max(kMinAlignment, af)); }

double clamp_delta(double delta) noexcept { return std::min(kMaxDelta, std::max(kMinDelta, delta)); }

void AlignmentState::init(const AgentId& agent, const TaskId& task) {
  if (!values_.emplace(AssignmentKey{agent, task}, kInitialAlignment).second) {
    throw AlignmentError(AlignmentError::Code::already_initialized,
                         "alignment for (" + agent.str() + ", " + task.str() + ") already initialized");
  }
}

double AlignmentState::apply_delta(const AgentId& agent, const TaskId& task, double delta, int step,
                                   std::string cause) {
  auto it = values_.find({agent, task});
  if (it == values_.end()) {
    throw AlignmentError(AlignmentError::Code::unknown_assignment,
                         "unknown assignment (" + agent.str() + ", " + task.str() + ")");
  }
  const double old = it->second;
  it->second = clamp_alignment(old + delta);
  history_.push_back({step, agent, task, old, delta, it->second, std::move(cause)});
  return it->second;
}

double AlignmentState::value(const AgentId& agent, const TaskId& task) const {
  auto it = values_.find({agent, task});
  if (it == values_.end()) {
    throw AlignmentError(AlignmentError::Code::unknown_assignment,
                         "unknown assignment (" + agent.str() + ", " + task.str() + ")");
  }
  return it->second;
}

bool AlignmentState::contains(const AgentId& agent, const TaskId& task) const {
  return values_.count({agent, task}) != 0;
}

AlignmentState AlignmentState::replay(const std::vector<AssignmentKey>& pairs,
                                      const std::vector<AlignmentRecord>& history) {
  AlignmentState s;
  for (const auto& [a, t] : pairs) s.init(a, t);
  for (const auto& r : history) s.apply_delta(r.agent, r.task, r.delta, r.step, r.cause);
  return s;
}

double effective_progress(double hours, double af) {
  if (!(hours >= 0.0)) throw ContractViolation("effective_progress: hours must be non-negative");
  if (!(af >= kMinAlignment && af <= kMaxAlignment)) {
    throw ContractViolation("effective_progress: alignment outside [0.01, 1.00]");
  }
  return hours * af;
}

DeltaEvaluation rule_based_delta(MessageType request_type, bool resolved) {
  if (!resolved) return {0.0, "reply did not resolve the request"};
  switch (request_type) {
    case MessageType::help_request: return {kHelpResolvedDelta, "help request resolved"};
    case MessageType::need_clarification: return {kClarificationResolvedDelta, "clarification resolved"};
    case MessageType::meeting_invite:
    case MessageType::meeting_start: return meeting_delta();
    case MessageType::progress_update: return {kProgressUpdateDelta, "progress update carries no guidance"};
    case MessageType::response: return {0.0, "follow-up reply"};
  }
  return {0.0, ""};
}

DeltaEvaluation meeting_delta() { return {kMeetingDelta, "meeting held"}; }

DeltaEvaluation normalize_evaluation(double old_af, std::string_view response_text) {
  auto obj = extract_json_object(response_text);
  if (!obj) throw AdapterError("evaluation response contains no JSON object");
  const auto it = obj->find("new_alignment_factor");
  if (it == obj->end() || !it->is_number()) throw AdapterError("evaluation response lacks new_alignment_factor");
  const double proposed = it->get<double>();
  if (!std::isfinite(proposed)) throw AdapterError("new_alignment_factor is not finite");

  DeltaEvaluation out;
  out.delta = clamp_delta(clamp_alignment(proposed) - old_af);
  if (auto r = obj->find("reasoning"); r != obj->end() && r->is_string()) out.reasoning = r->get<std::string>();
  return out;
}

EvaluationOutcome evaluate_reply_delta(const ReplyEvaluationInput& input, ModelAdapter& adapter) {
  if (input.task == nullptr) throw ContractViolation("evaluate_reply_delta: task is required");
  EvaluationPromptInput p;
  p.task_id = input.task->id.str();
  p.description = input.task->description;
  p.required_skills.assign(input.task->required_skills.begin(), input.task->required_skills.end());
  p.actual_hours = input.task->accumulated_effective_hours;
  p.estimated_hours = input.task->estimated_hours;
  p.current_alignment = input.current_af;
  p.message_type = std::string(to_string(input.reply.type));
  p.from_agent = input.reply.from.str();
  if (input.original_request) p.original_request = input.original_request->content;
  p.reply_content = input.reply.content;

  const ChatTurn turn{"user", render_evaluation_prompt(p)};
  try {
    return {normalize_evaluation(input.current_af, adapter.complete({&turn, 1})), std::nullopt};
  } catch (const std::exception& e) {
    return {rule_based_delta(input.request_type, input.resolved),
            std::string("alignment evaluator fallback: ") + e.what()};
  }
}

}  // namespace c2c
