#include <c2c/world.hpp>

#include <algorithm>
#include <cctype>

namespace c2c {

std::string_view to_string(IntentionKind k) noexcept {
  switch (k) {
    case IntentionKind::continue_task: return "CONTINUE_TASK";
    case IntentionKind::check_messages: return "CHECK_MESSAGES";
    case IntentionKind::request_help: return "REQUEST_HELP";
    case IntentionKind::need_clarification: return "NEED_CLARIFICATION";
    case IntentionKind::report_progress: return "REPORT_PROGRESS";
    case IntentionKind::schedule_meeting: return "SCHEDULE_MEETING";
  }
  return "UNKNOWN";
}

std::optional<IntentionKind> parse_intention(std::string_view s) {
  std::string v;
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      v.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    } else if (!v.empty()) {
      break;
    }
  }
  for (auto k : {IntentionKind::continue_task, IntentionKind::check_messages, IntentionKind::request_help,
                 IntentionKind::need_clarification, IntentionKind::report_progress, IntentionKind::schedule_meeting}) {
    if (v == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ActionKind k) noexcept {
  switch (k) {
    case ActionKind::work: return "work";
    case ActionKind::communicate: return "communicate";
    case ActionKind::reply: return "reply";
    case ActionKind::meeting: return "meeting";
    case ActionKind::idle: return "idle";
  }
  return "unknown";
}

const AgentProfile& WorldState::agent(const AgentId& id) const {
  auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentProfile& a) { return a.id == id; });
  if (it == agents.end()) throw ContractViolation("unknown agent " + id.str());
  return *it;
}

AgentProfile& WorldState::agent(const AgentId& id) {
  auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentProfile& a) { return a.id == id; });
  if (it == agents.end()) throw ContractViolation("unknown agent " + id.str());
  return *it;
}

const AgentId& WorldState::manager_id() const {
  for (const auto& a : agents) {
    if (a.role == Role::manager) return a.id;
  }
  throw ContractViolation("world has no manager");
}

std::vector<TaskId> WorldState::tasks_of(const AgentId& agent) const {
  std::vector<TaskId> out;
  for (const auto& [id, n] : graph.nodes()) {
    if (n.is_leaf() && n.assignee == agent) out.push_back(id);
  }
  return out;
}

bool WorldState::busy(const AgentId& agent) const {
  auto it = runtime.find(agent);
  return it != runtime.end() && it->second.active.has_value();
}

MessageId WorldState::new_message_id() { return MessageId("m" + std::to_string(next_message++)); }
ThreadId WorldState::new_thread_id() { return ThreadId("th" + std::to_string(next_thread++)); }
MeetingId WorldState::new_meeting_id() { return MeetingId("mt" + std::to_string(next_meeting++)); }

}  // namespace c2c
