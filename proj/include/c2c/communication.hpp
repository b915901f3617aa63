#pragma once

#include <c2c/core.hpp>

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace c2c {

enum class Channel { chat, email, meeting };

enum class MessageType {
  help_request,
  need_clarification,
  progress_update,
  meeting_invite,
  meeting_start,
  response,
};

std::string_view to_string(Channel c) noexcept;
std::string_view to_string(MessageType t) noexcept;  // upper-case wire names, e.g. "HELP_REQUEST"
std::optional<Channel> parse_channel(std::string_view s);
std::optional<MessageType> parse_message_type(std::string_view s);

struct Message {
  MessageId id;
  ThreadId thread;
  AgentId from;
  std::vector<AgentId> to;
  Channel channel = Channel::chat;
  MessageType type = MessageType::response;
  std::optional<TaskId> about_task;
  std::string content;
  int sent_step = 0;
  int delivery_step = 0;
  std::optional<MeetingId> meeting;
  std::vector<AgentId> participants;  // meeting messages only
  double cost_hours = 0.0;
};

inline constexpr int kMaxReplyRounds = 3;

struct Thread {
  ThreadId id;
  MessageId root;
  MessageType root_type = MessageType::help_request;
  AgentId requester;
  std::vector<AgentId> participants;  // requester first
  std::optional<TaskId> about_task;
  Channel channel = Channel::chat;
  int reply_rounds = 0;
  bool open = true;
  bool resolved = false;
  std::vector<MessageId> messages;
  AgentId last_sender;
};

class CommError : public std::runtime_error {
 public:
  enum class Code { thread_depth_exceeded, thread_closed, not_participant, meeting_needs_participants };

  CommError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] Code code() const noexcept { return code_; }

 private:
  Code code_;
};

std::size_t word_count(std::string_view text) noexcept;

/// Time cost of one communication act, in hours.
///   chat    3 min + 1 min per started 100 words
///   email   9 min + 1 min per started 50 words
///   meeting max(30, 30 + 5 * prep + 2 * participants) min, prep = 1
double communication_cost(Channel channel, std::size_t content_word_count, int participants);

/// Staging area for messages in flight. Delivery is always one step after sending.
class CommBuffer {
 public:
  void enqueue(Message message, int current_step);

  /// Removes and returns every message due at `current_step`, in canonical
  /// (sent_step, from, message id) order.
  std::vector<Message> deliver_due(int current_step);

  [[nodiscard]] const std::vector<Message>& pending() const noexcept { return pending_; }
  [[nodiscard]] bool empty() const noexcept { return pending_.empty(); }

 private:
  std::vector<Message> pending_;
};

/// Opens a thread rooted at `root`.
Thread open_thread(const Message& root);

/// Builds the next RESPONSE on `thread`. The thread closes when the reply
/// resolves the request or the round limit is reached.
Message reply(Thread& thread, const AgentId& from, std::string content, int current_step,
              MessageId id, bool resolves);

/// Agents that owe the next reply on an open thread.
[[nodiscard]] std::vector<AgentId> awaiting_reply_from(const Thread& thread);

enum class MeetingStatus { pending, started, done, cancelled };

struct Meeting {
  MeetingId id;
  AgentId organizer;
  std::vector<AgentId> invited;  // excludes the organizer
  std::set<AgentId> rsvped;
  std::vector<AgentId> attendees;  // fixed at start
  std::optional<TaskId> about_task;
  int invite_step = 0;
  int start_step = -1;
  int duration_steps = 0;
  double cost_hours = 0.0;
  MeetingStatus status = MeetingStatus::pending;
};

struct ScheduledMeeting {
  Message invite;
  Meeting meeting;
};

/// `participants` must include the organizer and at least one other agent.
ScheduledMeeting schedule_meeting(const AgentId& organizer, std::span<const AgentId> participants,
                                  const std::optional<TaskId>& about_task, int current_step,
                                  MessageId invite_id, MeetingId meeting_id, std::string content);

/// Earliest step a meeting invited at `invite_step` can begin: one step for the
/// invite to land, one to answer it, and no earlier than every participant is free.
int meeting_start_step(int invite_step, std::span<const int> busy_until_steps);

}  // namespace c2c
