#include <c2c/communication.hpp>

#include <algorithm>
#include <cctype>

namespace c2c {

std::string_view to_string(Channel c) noexcept {
  switch (c) {
    case Channel::chat: return "chat";
    case Channel::email: return "email";
    case Channel::meeting: return "meeting";
  }
  return "unknown";
}

std::string_view to_string(MessageType t) noexcept {
  switch (t) {
    case MessageType::help_request: return "HELP_REQUEST";
    case MessageType::need_clarification: return "NEED_CLARIFICATION";
    case MessageType::progress_update: return "PROGRESS_UPDATE";
    case MessageType::meeting_invite: return "MEETING_INVITE";
    case MessageType::meeting_start: return "MEETING_START";
    case MessageType::response: return "RESPONSE";
  }
  return "UNKNOWN";
}

std::optional<Channel> parse_channel(std::string_view s) {
  for (auto c : {Channel::chat, Channel::email, Channel::meeting}) {
    if (to_lower(s) == to_string(c)) return c;
  }
  return std::nullopt;
}

std::optional<MessageType> parse_message_type(std::string_view s) {
  for (auto t : {MessageType::help_request, MessageType::need_clarification, MessageType::progress_update,
                 MessageType::meeting_invite, MessageType::meeting_start, MessageType::response}) {
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

std::size_t word_count(std::string_view text) noexcept {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

namespace {

std::size_t started_blocks(std::size_t words, std::size_t block) { return (words + block - 1) / block; }

}  // namespace

double communication_cost(Channel channel, std::size_t content_word_count, int participants) {
  double minutes = 0.0;
  switch (channel) {
    case Channel::chat:
      if (participants < 1) throw ContractViolation("chat needs at least one recipient");
      minutes = 3.0 + static_cast<double>(started_blocks(content_word_count, 100));
      break;
    case Channel::email:
      if (participants < 1) throw ContractViolation("email needs at least one recipient");
      minutes = 9.0 + static_cast<double>(started_blocks(content_word_count, 50));
      break;
    case Channel::meeting: {
      if (participants < 2) {
        throw CommError(CommError::Code::meeting_needs_participants, "meeting needs participants");
      }
      constexpr double kPrepBlocks = 1.0;
      minutes = std::max(30.0, 30.0 + 5.0 * kPrepBlocks + 2.0 * participants);
      break;
    }
  }
  return minutes / 60.0;
}

void CommBuffer::enqueue(Message message, int current_step) {
  if (message.sent_step != current_step) {
    throw ContractViolation("enqueue: message sent_step does not match the current step");
  }
  message.delivery_step = current_step + 1;
  auto key = [](const Message& m) { return std::tie(m.sent_step, m.from, m.id); };
  auto pos = std::upper_bound(pending_.begin(), pending_.end(), message,
                              [&](const Message& a, const Message& b) { return key(a) < key(b); });
  pending_.insert(pos, std::move(message));
}

std::vector<Message> CommBuffer::deliver_due(int current_step) {
  std::vector<Message> due;
  auto split = std::stable_partition(pending_.begin(), pending_.end(),
                                     [&](const Message& m) { return m.delivery_step <= current_step; });
  due.assign(std::make_move_iterator(pending_.begin()), std::make_move_iterator(split));
  pending_.erase(pending_.begin(), split);
  return due;
}

Thread open_thread(const Message& root) {
  Thread t;
  t.id = root.thread;
  t.root = root.id;
  t.root_type = root.type;
  t.requester = root.from;
  t.participants.push_back(root.from);
  for (const auto& a : root.to) {
    if (std::find(t.participants.begin(), t.participants.end(), a) == t.participants.end()) {
      t.participants.push_back(a);
    }
  }
  t.about_task = root.about_task;
  t.channel = root.channel;
  t.messages.push_back(root.id);
  t.last_sender = root.from;
  return t;
}

std::vector<AgentId> awaiting_reply_from(const Thread& thread) {
  std::vector<AgentId> out;
  if (!thread.open) return out;
  for (const auto& p : thread.participants) {
    if (p != thread.last_sender) out.push_back(p);
  }
  return out;
}

Message reply(Thread& thread, const AgentId& from, std::string content, int current_step, MessageId id,
              bool resolves) {
  if (thread.reply_rounds >= kMaxReplyRounds) {
    throw CommError(CommError::Code::thread_depth_exceeded, "thread depth exceeded");
  }
  if (!thread.open) throw CommError(CommError::Code::thread_closed, "thread closed");
  if (std::find(thread.participants.begin(), thread.participants.end(), from) == thread.participants.end()) {
    throw CommError(CommError::Code::not_participant, from.str() + " is not in thread " + thread.id.str());
  }

  Message m;
  m.id = std::move(id);
  m.thread = thread.id;
  m.from = from;
  for (const auto& p : thread.participants) {
    if (p != from) m.to.push_back(p);
  }
  m.channel = thread.channel;
  m.type = MessageType::response;
  m.about_task = thread.about_task;
  m.content = std::move(content);
  m.sent_step = current_step;
  m.delivery_step = current_step + 1;
  m.cost_hours = communication_cost(m.channel, word_count(m.content), static_cast<int>(m.to.size()));

  ++thread.reply_rounds;
  thread.messages.push_back(m.id);
  thread.last_sender = from;
  if (resolves) thread.resolved = true;
  if (resolves || thread.reply_rounds >= kMaxReplyRounds) thread.open = false;
  return m;
}

ScheduledMeeting schedule_meeting(const AgentId& organizer, std::span<const AgentId> participants,
                                  const std::optional<TaskId>& about_task, int current_step, MessageId invite_id,
                                  MeetingId meeting_id, std::string content) {
  std::vector<AgentId> invited;
  for (const auto& p : participants) {
    if (p != organizer && std::find(invited.begin(), invited.end(), p) == invited.end()) invited.push_back(p);
  }
  std::sort(invited.begin(), invited.end());
  if (invited.empty()) {
    throw CommError(CommError::Code::meeting_needs_participants, "meeting needs participants");
  }

  ScheduledMeeting out;
  out.meeting.id = meeting_id;
  out.meeting.organizer = organizer;
  out.meeting.invited = invited;
  out.meeting.about_task = about_task;
  out.meeting.invite_step = current_step;

  auto& m = out.invite;
  m.id = std::move(invite_id);
  m.thread = ThreadId(meeting_id.str());
  m.from = organizer;
  m.to = invited;
  m.channel = Channel::meeting;
  m.type = MessageType::meeting_invite;
  m.about_task = about_task;
  m.content = std::move(content);
  m.sent_step = current_step;
  m.delivery_step = current_step + 1;
  m.meeting = meeting_id;
  m.participants.push_back(organizer);
  m.participants.insert(m.participants.end(), invited.begin(), invited.end());
  return out;
}

int meeting_start_step(int invite_step, std::span<const int> busy_until_steps) {
  int start = invite_step + 2;
  for (int b : busy_until_steps) start = std::max(start, b);
  return start;
}

}  // namespace c2c
