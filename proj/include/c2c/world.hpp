#pragma once

#include <c2c/alignment.hpp>
#include <c2c/communication.hpp>
#include <c2c/core.hpp>
#include <c2c/task_graph.hpp>
#include <c2c/trace.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace c2c {

enum class IntentionKind {
  continue_task,
  check_messages,
  request_help,
  need_clarification,
  report_progress,
  schedule_meeting,
};

std::string_view to_string(IntentionKind k) noexcept;  // "CONTINUE_TASK", ...
std::optional<IntentionKind> parse_intention(std::string_view s);

struct Intention {
  IntentionKind kind = IntentionKind::continue_task;
  std::string reasoning;
  std::optional<TaskId> task;  // subject of a communicating intention, when the policy picked one
};

enum class ActionKind { work, communicate, reply, meeting, idle };

std::string_view to_string(ActionKind k) noexcept;

struct Action {
  ActionKind kind = ActionKind::idle;
  std::string target;  // task, thread, or meeting id
  int duration_steps = 1;
  std::string note;    // "decompose", "rsvp", "read", ...
};

/// An action in flight plus whatever it emits when it completes.
struct ActiveAction {
  Action action;
  int remaining = 1;
  int started_step = 0;
  std::optional<IntentionKind> intention;
  std::optional<Message> outgoing;          // new request / update / invite
  std::optional<ThreadId> reply_thread;
  std::string reply_content;
  bool reply_resolves = true;
  std::optional<MeetingId> meeting;         // attendance or scheduling
  std::vector<AgentId> meeting_participants;
};

struct InboxEntry {
  Message message;
  bool read = false;
};

struct AgentRuntime {
  std::vector<InboxEntry> inbox;
  std::optional<ActiveAction> active;
  std::optional<IntentionKind> last_intention;
  int last_intention_step = -1;
  std::string last_action;
};

/// Per (agent, task) bookkeeping used by the policies.
struct AssignmentRuntime {
  int steps_worked = 0;
  int steps_since_af_gain = 0;
  bool half_reported = false;
  bool done_reported = false;
};

struct WorldState {
  SimClock clock;
  std::vector<AgentProfile> agents;  // ascending id
  TaskGraph graph;
  AlignmentState alignment;
  CommBuffer buffer;
  std::map<AgentId, AgentRuntime> runtime;
  std::map<AssignmentKey, AssignmentRuntime> assignments;
  std::map<ThreadId, Thread> threads;
  std::map<MessageId, Message> sent;  // every message handed to the buffer
  std::map<MeetingId, Meeting> meetings;
  std::uint64_t rng_seed = 0;
  TraceLog trace;
  double communication_hours = 0.0;
  std::map<TaskId, int> completion_step;  // step count at which a root finished
  bool planned = false;

  std::uint64_t next_message = 1;
  std::uint64_t next_thread = 1;
  std::uint64_t next_meeting = 1;

  [[nodiscard]] const AgentProfile& agent(const AgentId& id) const;
  [[nodiscard]] AgentProfile& agent(const AgentId& id);
  [[nodiscard]] const AgentId& manager_id() const;
  /// Leaf tasks assigned to `agent`, ascending id.
  [[nodiscard]] std::vector<TaskId> tasks_of(const AgentId& agent) const;
  [[nodiscard]] bool busy(const AgentId& agent) const;

  MessageId new_message_id();
  ThreadId new_thread_id();
  MeetingId new_meeting_id();
};

}  // namespace c2c
