#include <c2c/policy.hpp>

#include <c2c/prompts.hpp>

#include <algorithm>

namespace c2c {

const AssignmentView* PolicyContext::active_assignment() const {
  for (const auto& a : assigned) {
    if (a.ready && !a.done) return &a;
  }
  return nullptr;
}

const AssignmentView* PolicyContext::find(const TaskId& task) const {
  for (const auto& a : assigned) {
    if (a.task == task) return &a;
  }
  return nullptr;
}

namespace {

bool is_request(MessageType t) {
  return t == MessageType::help_request || t == MessageType::need_clarification;
}

bool in_inbox(const AgentRuntime& rt, const MessageId& id) {
  return std::any_of(rt.inbox.begin(), rt.inbox.end(), [&](const InboxEntry& e) { return e.message.id == id; });
}

int delivery_step_of(const AgentRuntime& rt, const MessageId& id) {
  for (const auto& e : rt.inbox) {
    if (e.message.id == id) return e.message.delivery_step;
  }
  return -1;
}

}  // namespace

PolicyContext build_context(const WorldState& world, const AgentId& agent_id) {
  PolicyContext ctx;
  ctx.agent = world.agent(agent_id);
  ctx.manager = world.manager_id();
  ctx.step = world.clock.step;
  ctx.hours_per_step = world.clock.hours_per_step;
  ctx.seed = world.rng_seed;

  const auto& rt = world.runtime.at(agent_id);
  const auto& graph = world.graph;

  for (const auto& task_id : world.tasks_of(agent_id)) {
    const auto& node = graph.node(task_id);
    AssignmentView v;
    v.task = task_id;
    v.description = node.description;
    v.required_skills = node.required_skills;
    v.estimated_hours = node.estimated_hours;
    v.accumulated_hours = node.accumulated_effective_hours;
    v.progress = node.progress();
    v.done = node.done();
    v.ready = graph.is_ready(task_id);
    if (world.alignment.contains(agent_id, task_id)) v.af = world.alignment.value(agent_id, task_id);
    if (auto it = world.assignments.find({agent_id, task_id}); it != world.assignments.end()) {
      v.hours_worked = it->second.steps_worked * ctx.hours_per_step;
      v.steps_since_af_gain = it->second.steps_since_af_gain;
      v.hours_since_af_gain = it->second.steps_since_af_gain * ctx.hours_per_step;
      v.half_reported = it->second.half_reported;
      v.done_reported = it->second.done_reported;
    }
    for (const auto& [tid, th] : world.threads) {
      if (th.open && th.requester == agent_id && th.about_task == task_id && is_request(th.root_type)) {
        v.awaiting_reply = true;
        break;
      }
    }
    for (const auto& [mid, m] : world.meetings) {
      if (m.organizer == agent_id && m.about_task == task_id) {
        v.meeting_organized = true;
        break;
      }
    }
    for (const auto& [other_id, other] : graph.nodes()) {
      if (other.done() || !other.dependencies.count(task_id) || graph.is_ready(other_id)) continue;
      if (other.assignee && *other.assignee != agent_id &&
          std::find(v.blocked_dependents.begin(), v.blocked_dependents.end(), *other.assignee) ==
              v.blocked_dependents.end()) {
        v.blocked_dependents.push_back(*other.assignee);
      }
    }
    std::sort(v.blocked_dependents.begin(), v.blocked_dependents.end());
    ctx.assigned.push_back(std::move(v));
  }

  for (const auto& e : rt.inbox) {
    if (e.read) continue;
    if (e.message.delivery_step > ctx.step) throw ContractViolation("inbox holds an undelivered message");
    ctx.inbox.push_back(e.message);
    if (e.message.type == MessageType::meeting_start) ctx.has_meeting_start = true;
  }

  for (const auto& [tid, th] : world.threads) {
    if (!th.open || th.messages.empty()) continue;
    const auto owed = awaiting_reply_from(th);
    if (std::find(owed.begin(), owed.end(), agent_id) == owed.end()) continue;
    const auto& last = th.messages.back();
    if (!in_inbox(rt, last)) continue;
    ctx.owed_replies.push_back({tid, th.root_type, th.requester, th.about_task, delivery_step_of(rt, last)});
  }
  std::stable_sort(ctx.owed_replies.begin(), ctx.owed_replies.end(), [](const OwedReply& a, const OwedReply& b) {
    return std::tie(a.last_delivery_step, a.thread) < std::tie(b.last_delivery_step, b.thread);
  });

  for (const auto& [mid, m] : world.meetings) {
    if (m.status != MeetingStatus::pending || m.rsvped.count(agent_id)) continue;
    if (std::find(m.invited.begin(), m.invited.end(), agent_id) == m.invited.end()) continue;
    const bool delivered = std::any_of(rt.inbox.begin(), rt.inbox.end(), [&](const InboxEntry& e) {
      return e.message.type == MessageType::meeting_invite && e.message.meeting == mid;
    });
    if (delivered) ctx.pending_invites.push_back(mid);
  }

  for (const auto& a : world.agents) {
    ctx.team.push_back({a.id, a.name, a.role, a.skills, world.busy(a.id)});
  }
  ctx.last_intention = rt.last_intention;
  ctx.last_intention_step = rt.last_intention_step;
  ctx.last_action = rt.last_action;
  return ctx;
}

std::string template_message(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about,
                             const std::vector<AgentId>& recipients) {
  const std::string header = std::string(about.task.str()) + " (" + fixed(about.estimated_hours, 2) + "h, " +
                             fixed(about.progress * 100.0, 0) + "% done, alignment " + fixed(about.af, 2) + ")";
  std::vector<std::string> gap;
  for (const auto& s : about.required_skills) {
    if (!ctx.agent.skills.count(s)) gap.push_back(s);
  }
  std::string gap_text;
  for (const auto& s : gap.empty() ? std::vector<std::string>(about.required_skills.begin(), about.required_skills.end())
                                   : gap) {
    gap_text += (gap_text.empty() ? "" : ", ") + s;
  }

  switch (kind) {
    case IntentionKind::request_help:
      return "Help needed on " + header + ". Difficulty: progress is slow at the current alignment. Skill gap: " +
             gap_text + ". Please share concrete guidance on the approach and known pitfalls.";
    case IntentionKind::need_clarification:
      return "Clarification needed on " + header + ": " + about.description +
             ". Please confirm scope, expected interfaces and acceptance criteria.";
    case IntentionKind::report_progress:
      return "Progress update on " + header + ": " + fixed(about.accumulated_hours, 2) + " of " +
             fixed(about.estimated_hours, 2) + " effective hours complete.";
    case IntentionKind::schedule_meeting: {
      std::string who;
      for (const auto& r : recipients) who += (who.empty() ? "" : ", ") + r.str();
      return "Meeting about " + header + " to coordinate dependent work with " + who + ".";
    }
    case IntentionKind::continue_task:
    case IntentionKind::check_messages:
      break;
  }
  return {};
}

std::string template_reply(const PolicyContext& ctx, const OwedReply& owed) {
  const std::string task = owed.task ? owed.task->str() : std::string("the task");
  switch (owed.root_type) {
    case MessageType::help_request:
      return "Re " + task + ": " + ctx.agent.id.str() + " here. Suggested approach, relevant examples and the main "
             "pitfalls to avoid are below; ping me if anything stays unclear.";
    case MessageType::need_clarification:
      return "Re " + task + ": scope, interfaces and acceptance criteria confirmed; see the notes below.";
    default:
      return "Re " + task + ": acknowledged.";
  }
}

Composition Policy::compose(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about,
                            const std::vector<AgentId>& recipients) const {
  return {template_message(ctx, kind, about, recipients), std::nullopt};
}

Composition Policy::compose_reply(const PolicyContext& ctx, const OwedReply& owed) const {
  return {template_reply(ctx, owed), std::nullopt};
}

Decision NoCommPolicy::decide(const PolicyContext&) const {
  return {{IntentionKind::continue_task, "no communication baseline", std::nullopt}, std::nullopt};
}

Decision FixedStepsPolicy::decide(const PolicyContext& ctx) const {
  const bool worker = ctx.agent.role == Role::worker;
  const bool has_open_work = std::any_of(ctx.assigned.begin(), ctx.assigned.end(),
                                         [](const AssignmentView& a) { return !a.done; });
  if (worker && has_open_work) {
    if (ctx.step > 0 && ctx.step % period_ == 0) {
      const AssignmentView* target = ctx.active_assignment();
      if (!target) {
        for (const auto& a : ctx.assigned) {
          if (!a.done) { target = &a; break; }
        }
      }
      return {{IntentionKind::report_progress, "scheduled status report", target->task}, std::nullopt};
    }
    const int period_start = ctx.step - ctx.step % period_;
    if (ctx.last_intention == IntentionKind::report_progress && period_start > 0 &&
        ctx.last_intention_step == period_start) {
      const AssignmentView* lowest = nullptr;
      for (const auto& a : ctx.assigned) {
        if (!a.done && (!lowest || a.af < lowest->af)) lowest = &a;
      }
      return {{IntentionKind::request_help, "scheduled help request", lowest->task}, std::nullopt};
    }
  }
  if (ctx.has_unread() || !ctx.owed_replies.empty()) {
    return {{IntentionKind::check_messages, "inbox not empty", std::nullopt}, std::nullopt};
  }
  return {{IntentionKind::continue_task, "", std::nullopt}, std::nullopt};
}

Decision HeuristicPolicy::decide(const PolicyContext& ctx) const {
  auto make = [](IntentionKind k, std::string why, std::optional<TaskId> task = std::nullopt) {
    return Decision{{k, std::move(why), std::move(task)}, std::nullopt};
  };

  if (ctx.has_meeting_start || !ctx.pending_invites.empty()) {
    return make(IntentionKind::check_messages, "meeting invite or start waiting");
  }
  if (!ctx.owed_replies.empty()) return make(IntentionKind::check_messages, "a teammate is waiting for my reply");

  if (const auto* a = ctx.active_assignment(); a && !a->awaiting_reply) {
    if (a->af < t_.af_threshold && a->steps_since_af_gain >= t_.stuck_steps) {
      return make(IntentionKind::request_help, "low alignment and no recent improvement", a->task);
    }
    if (a->af < t_.af_threshold && a->hours_worked == 0.0) {
      return make(IntentionKind::need_clarification, "low alignment before starting", a->task);
    }
  }
  for (const auto& a : ctx.assigned) {
    if (!a.done && !a.meeting_organized && a.blocked_dependents.size() >= t_.blocked_for_meeting) {
      return make(IntentionKind::schedule_meeting, "several teammates are blocked on this task", a.task);
    }
  }
  for (const auto& a : ctx.assigned) {
    if (a.done && !a.done_reported) return make(IntentionKind::report_progress, "task finished", a.task);
    // a midpoint update is only worth its cost when the completion report is still far off
    const double hours_left = (a.estimated_hours - a.accumulated_hours) / a.af;
    if (!a.done && a.progress >= t_.report_milestone && !a.half_reported && hours_left >= t_.report_horizon_hours) {
      return make(IntentionKind::report_progress, "halfway with a long way to go", a.task);
    }
  }
  if (!ctx.active_assignment() && ctx.has_unread()) return make(IntentionKind::check_messages, "nothing to work on");
  return make(IntentionKind::continue_task, "");
}

std::optional<Intention> parse_intention_response(std::string_view text) {
  auto obj = extract_json_object(text);
  if (!obj) return std::nullopt;
  auto it = obj->find("intention");
  if (it == obj->end() || !it->is_string()) return std::nullopt;
  auto kind = parse_intention(it->get<std::string>());
  if (!kind) return std::nullopt;
  Intention out;
  out.kind = *kind;
  if (auto r = obj->find("reasoning"); r != obj->end() && r->is_string()) out.reasoning = r->get<std::string>();
  return out;
}

std::string format_tasks_for_prompt(const PolicyContext& ctx) {
  if (ctx.assigned.empty()) return "- No tasks assigned";
  std::string out;
  std::size_t shown = 0;
  for (const auto& a : ctx.assigned) {
    if (shown == 3) break;
    ++shown;
    out += "- " + a.task.str() + ": " + a.description + " (progress: " + fixed(a.accumulated_hours, 1) + "/" +
           fixed(a.estimated_hours, 1) + "h, alignment: " + fixed(a.af, 2) +
           (a.done ? ", done" : a.ready ? "" : ", blocked by dependencies") + ")\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string format_message_info(const PolicyContext& ctx) {
  if (ctx.inbox.empty()) return "No new messages.";
  std::string out = "New messages (" + std::to_string(ctx.inbox.size()) + "):";
  for (const auto& m : ctx.inbox) {
    out += "\n- " + std::string(to_string(m.type)) + " from " + m.from.str();
    if (m.about_task) out += " about " + m.about_task->str();
    out += ": " + m.content;
  }
  return out;
}

Decision LlmPolicy::decide(const PolicyContext& ctx) const {
  IntentionPromptInput in;
  in.agent_name = ctx.agent.name;
  in.role = std::string(to_string(ctx.agent.role));
  in.tasks_block = format_tasks_for_prompt(ctx);
  in.message_info = format_message_info(ctx);
  in.last_action_info = ctx.last_action.empty() ? "Last action: none" : "Last action: " + ctx.last_action;
  const ChatTurn turn{"user", render_intention_prompt(in)};

  std::string failure;
  try {
    if (auto parsed = parse_intention_response(adapter_.complete({&turn, 1}))) return {*parsed, std::nullopt};
    failure = "unrecognized intention";
  } catch (const std::exception& e) {
    failure = e.what();
  }
  auto d = fallback_.decide(ctx);
  d.warning = "intention fallback to heuristic: " + failure;
  return d;
}

Composition LlmPolicy::compose(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about,
                               const std::vector<AgentId>& recipients) const {
  const auto draft = template_message(ctx, kind, about, recipients);
  CompositionPromptInput in;
  in.agent_name = ctx.agent.name;
  in.message_type = std::string(to_string(kind));
  in.channel = std::string(to_string(select_channel(kind, word_count(draft))));
  for (const auto& r : recipients) in.recipients.push_back(r.str());
  in.task_id = about.task.str();
  in.task_description = about.description;
  in.progress = about.progress;
  in.alignment = about.af;
  in.draft = draft;
  const ChatTurn turn{"user", render_composition_prompt(in)};
  try {
    auto text = adapter_.complete({&turn, 1});
    if (word_count(text) > 0) return {std::move(text), std::nullopt};
    return {draft, std::string("composition fallback to template: empty completion")};
  } catch (const std::exception& e) {
    return {draft, std::string("composition fallback to template: ") + e.what()};
  }
}

std::vector<AgentId> select_recipients(const PolicyContext& ctx, IntentionKind kind, const AssignmentView& about) {
  switch (kind) {
    case IntentionKind::request_help: {
      const TeamView* best = nullptr;
      double best_score = 0.0;
      for (const auto& m : ctx.team) {
        if (m.id == ctx.agent.id || m.role == Role::manager || m.busy) continue;
        AgentProfile probe;
        probe.skills = m.skills;
        const double s = skill_match_score(probe, about.required_skills);
        if (s > best_score) {  // team is ascending by id, so ties keep the lower id
          best = &m;
          best_score = s;
        }
      }
      if (best) return {best->id};
      return {ctx.manager};
    }
    case IntentionKind::need_clarification:
    case IntentionKind::report_progress:
      return {ctx.manager};
    case IntentionKind::schedule_meeting: {
      std::vector<AgentId> out{ctx.manager, ctx.agent.id};
      out.insert(out.end(), about.blocked_dependents.begin(), about.blocked_dependents.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    case IntentionKind::continue_task:
    case IntentionKind::check_messages:
      break;
  }
  return {};
}

Channel select_channel(IntentionKind kind, std::size_t content_words) {
  switch (kind) {
    case IntentionKind::need_clarification: return Channel::chat;
    case IntentionKind::request_help: return content_words < kShortMessageWords ? Channel::chat : Channel::email;
    case IntentionKind::report_progress: return Channel::email;
    case IntentionKind::schedule_meeting: return Channel::meeting;
    case IntentionKind::continue_task:
    case IntentionKind::check_messages:
      break;
  }
  return Channel::chat;
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, ModelAdapter* adapter, HeuristicThresholds t) {
  switch (kind) {
    case PolicyKind::no_comm: return std::make_unique<NoCommPolicy>();
    case PolicyKind::fixed_steps: return std::make_unique<FixedStepsPolicy>();
    case PolicyKind::c2c_heuristic: return std::make_unique<HeuristicPolicy>(t);
    case PolicyKind::c2c_llm:
      if (!adapter) throw ContractViolation("c2c_llm policy needs a model adapter");
      return std::make_unique<LlmPolicy>(*adapter, t);
  }
  throw ContractViolation("unknown policy kind");
}

}  // namespace c2c
