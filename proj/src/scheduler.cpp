#include <c2c/scheduler.hpp>

#include <algorithm>
#include <future>

namespace c2c {

namespace {

using ojson = nlohmann::ordered_json;

bool is_request(MessageType t) {
  return t == MessageType::help_request || t == MessageType::need_clarification;
}

MessageType message_type_for(IntentionKind k) {
  switch (k) {
    case IntentionKind::request_help: return MessageType::help_request;
    case IntentionKind::need_clarification: return MessageType::need_clarification;
    case IntentionKind::report_progress: return MessageType::progress_update;
    case IntentionKind::schedule_meeting: return MessageType::meeting_invite;
    case IntentionKind::continue_task:
    case IntentionKind::check_messages:
      break;
  }
  throw ContractViolation("intention does not produce a message");
}

ojson ids_json(const std::vector<AgentId>& ids) {
  auto a = ojson::array();
  for (const auto& id : ids) a.push_back(id.str());
  return a;
}

ojson message_json(const Message& m) {
  ojson j;
  j["message_id"] = m.id.str();
  j["thread_id"] = m.thread.str();
  j["from"] = m.from.str();
  j["to"] = ids_json(m.to);
  j["channel"] = std::string(to_string(m.channel));
  j["type"] = std::string(to_string(m.type));
  j["task"] = m.about_task ? ojson(m.about_task->str()) : ojson(nullptr);
  j["meeting"] = m.meeting ? ojson(m.meeting->str()) : ojson(nullptr);
  j["sent_step"] = m.sent_step;
  j["delivery_step"] = m.delivery_step;
  j["words"] = word_count(m.content);
  j["cost_h"] = m.cost_hours;
  j["content"] = m.content;
  return j;
}

}  // namespace

Engine::Engine(const Scenario& scenario, EngineOptions options) : options_(options), roots_(scenario.tasks) {
  if (!options_.policy) throw ContractViolation("Engine needs a policy");
  if (options_.evaluator == EvaluatorKind::llm && !options_.evaluator_adapter) {
    throw ContractViolation("llm evaluator needs a model adapter");
  }
  if (!options_.planner) {
    owned_planner_ = std::make_unique<EvenPlanner>();
    options_.planner = owned_planner_.get();
  }
  world_.clock.hours_per_step = scenario.hours_per_step;
  world_.clock.max_steps = scenario.max_steps;
  world_.agents = scenario.team;
  std::sort(world_.agents.begin(), world_.agents.end(),
            [](const AgentProfile& a, const AgentProfile& b) { return a.id < b.id; });
  world_.rng_seed = scenario.seed;
  for (const auto& a : world_.agents) world_.runtime[a.id];
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    world_.graph.add_root(TaskId("T" + std::to_string(i + 1)), roots_[i]);
  }
  (void)world_.manager_id();
}

bool Engine::finished() const {
  return world_.clock.at_cap() || (world_.planned && world_.graph.all_roots_done());
}

void Engine::step() {
  if (finished()) throw ContractViolation("step() called on a finished run");
  const int s = world_.clock.step;
  deliver_phase(s);
  decide_and_resolve_phase(s);
  execute_phase(s);
  evaluate_phase(s);
  stage_phase(s);
  world_.clock.advance();
}

SimResult Engine::run() && {
  while (!finished()) step();
  const int last = std::max(0, world_.clock.step - 1);
  for (const auto& m : world_.buffer.pending()) {
    ojson j;
    j["code"] = "undelivered";
    j["message_id"] = m.id.str();
    j["text"] = "run ended before delivery at step " + std::to_string(m.delivery_step);
    world_.trace.append(last, TraceKind::warning, std::move(j));
  }
  SimResult r;
  r.all_done = world_.planned && world_.graph.all_roots_done();
  r.steps_run = world_.clock.step;
  r.world = std::move(world_);
  return r;
}

void Engine::warn(int step, const std::string& code, const std::string& text) {
  ojson j;
  j["code"] = code;
  j["text"] = text;
  world_.trace.append(step, TraceKind::warning, std::move(j));
}

std::vector<MessageId> Engine::mark_read(const AgentId& agent) {
  std::vector<MessageId> read;
  for (auto& e : world_.runtime.at(agent).inbox) {
    if (!e.read) {
      e.read = true;
      read.push_back(e.message.id);
    }
  }
  return read;
}

// (1)
void Engine::deliver_phase(int step) {
  for (auto& m : world_.buffer.deliver_due(step)) {
    std::vector<AgentId> recipients = m.to;
    for (const auto& r : recipients) {
      world_.runtime.at(r).inbox.push_back({m, false});
      ojson j;
      j["message_id"] = m.id.str();
      j["from"] = m.from.str();
      j["to"] = r.str();
      j["type"] = std::string(to_string(m.type));
      j["sent_step"] = m.sent_step;
      world_.trace.append(step, TraceKind::message_delivered, std::move(j));
    }

    if (m.type == MessageType::meeting_start && m.meeting) {
      auto& meeting = world_.meetings.at(*m.meeting);
      for (const auto& a : meeting.attendees) {
        auto& rt = world_.runtime.at(a);
        if (rt.active) {
          warn(step, "meeting_conflict", a.str() + " was busy when " + meeting.id.str() + " started");
          continue;
        }
        ActiveAction act;
        act.action = {ActionKind::meeting, meeting.id.str(), meeting.duration_steps, "attend"};
        act.remaining = meeting.duration_steps;
        act.started_step = step;
        act.meeting = meeting.id;
        rt.active = std::move(act);
        world_.agent(a).busy_until_step = step + meeting.duration_steps;
        for (auto& e : rt.inbox) {
          if (e.message.id == m.id) e.read = true;
        }
      }
      meeting.status = MeetingStatus::started;
    }

    if (m.type == MessageType::response) {
      const auto& th = world_.threads.at(m.thread);
      if (th.about_task && is_request(th.root_type) &&
          std::find(recipients.begin(), recipients.end(), th.requester) != recipients.end()) {
        pending_evals_.push_back({th.requester, *th.about_task, m.id.str(), m.id, th.id, false});
      }
    }
  }
}

// (2)-(4)
void Engine::decide_and_resolve_phase(int step) {
  if (!world_.planned) {
    // step 0 belongs to the manager's decomposition; everyone else waits for assignments
    for (const auto& a : world_.agents) {
      auto& rt = world_.runtime.at(a.id);
      if (rt.active) continue;
      if (a.role == Role::manager) {
        ActiveAction act;
        act.action = {ActionKind::work, "plan", 1, "decompose"};
        act.remaining = 1;
        act.started_step = step;
        rt.active = std::move(act);
      } else {
        rt.active = idle_action(step, "awaiting assignment");
      }
    }
    return;
  }

  std::vector<AgentId> idle;
  for (const auto& a : world_.agents) {
    if (!world_.runtime.at(a.id).active) idle.push_back(a.id);
  }
  std::vector<PolicyContext> contexts;
  contexts.reserve(idle.size());
  for (const auto& id : idle) contexts.push_back(build_context(world_, id));

  std::vector<Decision> decisions(idle.size());
  if (options_.parallel_decisions && idle.size() > 1) {
    std::vector<std::future<Decision>> futures;
    futures.reserve(idle.size());
    for (const auto& ctx : contexts) {
      futures.push_back(std::async(std::launch::async, [this, &ctx] { return options_.policy->decide(ctx); }));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) decisions[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < contexts.size(); ++i) decisions[i] = options_.policy->decide(contexts[i]);
  }

  for (std::size_t i = 0; i < idle.size(); ++i) {
    if (decisions[i].warning) warn(step, "policy_fallback", idle[i].str() + ": " + *decisions[i].warning);
    auto act = resolve_intention(decisions[i].intention, contexts[i]);
    auto& rt = world_.runtime.at(idle[i]);
    rt.last_intention = decisions[i].intention.kind;
    rt.last_intention_step = step;
    world_.agent(idle[i]).busy_until_step = step + act.action.duration_steps;
    rt.active = std::move(act);
  }
}

ActiveAction Engine::idle_action(int step, std::string note) const {
  ActiveAction act;
  act.action = {ActionKind::idle, "", 1, std::move(note)};
  act.remaining = 1;
  act.started_step = step;
  return act;
}

ActiveAction Engine::work_or_idle(const PolicyContext& ctx, int step) const {
  if (const auto* a = ctx.active_assignment()) {
    ActiveAction act;
    act.action = {ActionKind::work, a->task.str(), 1, ""};
    act.remaining = 1;
    act.started_step = step;
    return act;
  }
  return idle_action(step);
}

ActiveAction Engine::resolve_intention(const Intention& intention, const PolicyContext& ctx) {
  const int step = ctx.step;
  const AgentId& me = ctx.agent.id;
  ActiveAction act;

  switch (intention.kind) {
    case IntentionKind::continue_task:
      act = work_or_idle(ctx, step);
      break;

    case IntentionKind::check_messages: {
      if (!ctx.pending_invites.empty()) {
        const auto& mid = ctx.pending_invites.front();
        world_.meetings.at(mid).rsvped.insert(me);
        act = idle_action(step, "rsvp");
        act.action.kind = ActionKind::reply;
        act.action.target = mid.str();
        break;
      }
      if (!ctx.owed_replies.empty()) {
        const auto& owed = ctx.owed_replies.front();
        const auto& thread = world_.threads.at(owed.thread);
        auto body = options_.policy->compose_reply(ctx, owed);
        const double cost = communication_cost(thread.channel, word_count(body.text),
                                               static_cast<int>(thread.participants.size()) - 1);
        const int duration = hours_to_steps(cost, ctx.hours_per_step);
        act.action = {ActionKind::reply, owed.thread.str(), duration, std::string(to_string(owed.root_type))};
        act.remaining = duration;
        act.started_step = step;
        act.reply_thread = owed.thread;
        act.reply_content = std::move(body.text);
        act.reply_resolves = options_.policy->reply_resolves(ctx, thread);
        break;
      }
      act = idle_action(step, "read");
      break;
    }

    case IntentionKind::request_help:
    case IntentionKind::need_clarification:
    case IntentionKind::report_progress:
    case IntentionKind::schedule_meeting: {
      const AssignmentView* about = intention.task ? ctx.find(*intention.task) : nullptr;
      if (!about) about = ctx.active_assignment();
      if (!about && intention.kind == IntentionKind::report_progress) {
        for (const auto& a : ctx.assigned) {
          if (a.done && !a.done_reported) { about = &a; break; }
        }
      }
      if (!about) {
        act = work_or_idle(ctx, step);
        break;
      }
      auto recipients = select_recipients(ctx, intention.kind, *about);
      recipients.erase(std::remove(recipients.begin(), recipients.end(), me), recipients.end());
      if (recipients.empty()) {
        act = work_or_idle(ctx, step);
        break;
      }
      auto body = options_.policy->compose(ctx, intention.kind, *about, recipients);
      if (body.warning) warn(step, "composition_fallback", me.str() + ": " + *body.warning);

      Message m;
      m.from = me;
      m.to = recipients;
      m.type = message_type_for(intention.kind);
      m.about_task = about->task;
      m.content = std::move(body.text);
      m.sent_step = step;

      int duration = 1;
      if (intention.kind == IntentionKind::schedule_meeting) {
        m.channel = Channel::meeting;
        m.participants = recipients;
        m.participants.push_back(me);
        std::sort(m.participants.begin(), m.participants.end());
        act.meeting_participants = m.participants;
        m.cost_hours = 0.0;  // billed when the meeting is held
      } else {
        m.channel = select_channel(intention.kind, word_count(m.content));
        m.cost_hours = communication_cost(m.channel, word_count(m.content), static_cast<int>(recipients.size()));
        duration = hours_to_steps(m.cost_hours, ctx.hours_per_step);
      }
      if (intention.kind == IntentionKind::report_progress) {
        auto& ar = world_.assignments[{me, about->task}];
        if (about->progress >= 0.5) ar.half_reported = true;
        if (about->done) ar.done_reported = ar.half_reported = true;
      }
      act.action = {ActionKind::communicate, about->task.str(), duration, std::string(to_string(m.type))};
      act.remaining = duration;
      act.started_step = step;
      act.outgoing = std::move(m);
      break;
    }
  }
  act.intention = intention.kind;
  return act;
}

nlohmann::ordered_json Engine::plan_all(int step) {
  std::map<AgentId, std::size_t> load;
  ojson planned = ojson::array();
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const TaskId root("T" + std::to_string(i + 1));
    auto outcome = options_.planner->plan(roots_[i], world_.agents);
    for (const auto& w : outcome.warnings) warn(step, "planner", w);
    const auto specs = outcome.plan.specs();
    const auto ids = world_.graph.add_subtasks(root, specs);
    auto assigned = assign(outcome.plan, ids, world_.graph, world_.agents, load);
    for (const auto& w : assigned.warnings) warn(step, "assignment", w);
    for (const auto& [agent, tasks] : assigned.by_agent) load[agent] += tasks.size();
    for (const auto& id : ids) {
      const auto& n = world_.graph.node(id);
      ojson p;
      p["task"] = id.str();
      p["parent"] = root.str();
      p["assignee"] = n.assignee->str();
      p["estimated_hours"] = n.estimated_hours;
      auto deps = ojson::array();
      for (const auto& d : n.dependencies) deps.push_back(d.str());
      p["dependencies"] = std::move(deps);
      planned.push_back(std::move(p));
    }
  }
  for (const auto& [id, n] : world_.graph.nodes()) {
    if (!n.is_leaf() || !n.assignee) continue;
    world_.alignment.init(*n.assignee, id);
    world_.assignments[{*n.assignee, id}];
  }
  world_.planned = true;
  return planned;
}

const Message& Engine::send(Message m, int step) {
  if (m.id.empty()) m.id = world_.new_message_id();
  if (m.thread.empty()) m.thread = world_.new_thread_id();
  m.sent_step = step;
  m.delivery_step = step + 1;
  world_.buffer.enqueue(m, step);
  world_.communication_hours += m.cost_hours;
  world_.trace.append(step, TraceKind::message_sent, message_json(m));
  const auto id = m.id;
  return world_.sent.emplace(id, std::move(m)).first->second;
}

// (5)
void Engine::execute_phase(int step) {
  for (const auto& agent : world_.agents) {
    auto& rt = world_.runtime.at(agent.id);
    if (!rt.active) rt.active = idle_action(step);
    auto& act = *rt.active;
    const bool first = act.started_step == step;

    ojson j;
    j["agent"] = agent.id.str();
    j["action"] = std::string(to_string(act.action.kind));
    j["target"] = act.action.target;
    j["note"] = act.action.note;
    j["intention"] = first && act.intention ? ojson(std::string(to_string(*act.intention))) : ojson(nullptr);
    j["duration"] = act.action.duration_steps;
    j["remaining"] = act.remaining - 1;
    if (first && act.intention == IntentionKind::check_messages) {
      auto arr = ojson::array();
      for (const auto& id : mark_read(agent.id)) arr.push_back(id.str());
      j["read"] = std::move(arr);
    }
    const bool decompose = act.action.kind == ActionKind::work && act.action.note == "decompose";
    if (decompose) j["subtasks"] = plan_all(step);
    world_.trace.append(step, TraceKind::action, std::move(j));

    if (decompose) {
      for (const auto& [key, af] : world_.alignment.values()) {
        ojson u;
        u["agent"] = key.first.str();
        u["task"] = key.second.str();
        u["old"] = af;
        u["delta"] = 0.0;
        u["new"] = af;
        u["cause"] = "init";
        u["reasoning"] = "";
        world_.trace.append(step, TraceKind::af_update, std::move(u));
      }
    } else if (act.action.kind == ActionKind::work) {
      const TaskId task(act.action.target);
      const auto& node = world_.graph.node(task);
      if (node.done() || !world_.graph.is_ready(task)) {
        warn(step, "stale_work", agent.id.str() + " had no workable task " + task.str());
      } else {
        const double af = world_.alignment.value(agent.id, task);
        const double eff = effective_progress(world_.clock.hours_per_step, af);
        auto outcome = world_.graph.record_work(task, eff);
        auto& ar = world_.assignments[{agent.id, task}];
        ++ar.steps_worked;
        ++ar.steps_since_af_gain;

        ojson p;
        p["agent"] = agent.id.str();
        p["task"] = task.str();
        p["hours"] = world_.clock.hours_per_step;
        p["af"] = af;
        p["effective"] = eff;
        p["accumulated"] = world_.graph.node(task).accumulated_effective_hours;
        world_.trace.append(step, TraceKind::progress, std::move(p));

        for (const auto& done : outcome.completed) {
          const auto& dn = world_.graph.node(done);
          const bool root = !dn.parent.has_value();
          ojson d;
          d["task"] = done.str();
          d["root"] = root;
          d["completion_step"] = step + 1;
          d["completed_at_h"] = (step + 1) * world_.clock.hours_per_step;
          d["estimated_hours"] = dn.estimated_hours;
          world_.trace.append(step, TraceKind::task_done, std::move(d));
          if (root) world_.completion_step[done] = step + 1;
        }
      }
    }

    if (--act.remaining <= 0) {
      complete_action(agent.id, act, step);
      std::string desc = std::string(to_string(act.action.kind));
      if (!act.action.target.empty()) desc += " " + act.action.target;
      if (!act.action.note.empty()) desc += " (" + act.action.note + ")";
      rt.last_action = std::move(desc);
      rt.active.reset();
    }
  }
}

void Engine::complete_action(const AgentId& agent, ActiveAction& act, int step) {
  switch (act.action.kind) {
    case ActionKind::communicate: {
      if (!act.outgoing) break;
      Message m = std::move(*act.outgoing);
      act.outgoing.reset();
      if (m.type == MessageType::meeting_invite) {
        const auto meeting_id = world_.new_meeting_id();
        auto scheduled = schedule_meeting(agent, act.meeting_participants, m.about_task, step,
                                          world_.new_message_id(), meeting_id, m.content);
        world_.meetings.emplace(meeting_id, scheduled.meeting);
        send(std::move(scheduled.invite), step);
        break;
      }
      const auto& stored = send(std::move(m), step);
      auto th = open_thread(stored);
      if (!is_request(stored.type)) th.open = false;  // updates expect no reply
      world_.threads.emplace(th.id, std::move(th));
      break;
    }
    case ActionKind::reply: {
      if (!act.reply_thread) break;  // rsvp
      auto& th = world_.threads.at(*act.reply_thread);
      const auto owed = awaiting_reply_from(th);
      if (std::find(owed.begin(), owed.end(), agent) == owed.end()) {
        warn(step, "stale_reply", agent.str() + " no longer owes a reply on " + th.id.str());
        break;
      }
      send(reply(th, agent, act.reply_content, step, world_.new_message_id(), act.reply_resolves), step);
      break;
    }
    case ActionKind::meeting: {
      if (!act.meeting) break;
      auto& meeting = world_.meetings.at(*act.meeting);
      if (meeting.status != MeetingStatus::done) {
        meeting.status = MeetingStatus::done;
        finished_meetings_.push_back(meeting.id);
      }
      break;
    }
    case ActionKind::work:
    case ActionKind::idle:
      break;
  }
}

// (6)
void Engine::evaluate_phase(int step) {
  for (const auto& mid : finished_meetings_) {
    const auto& meeting = world_.meetings.at(mid);
    for (const auto& a : meeting.attendees) {
      // the gain lands on the attendee's current task under the same parent as the meeting topic
      std::optional<TaskId> parent;
      if (meeting.about_task) parent = world_.graph.node(*meeting.about_task).parent;
      for (const auto& t : world_.tasks_of(a)) {
        const auto& n = world_.graph.node(t);
        if (n.done() || n.parent != parent) continue;
        pending_evals_.push_back({a, t, mid.str(), std::nullopt, std::nullopt, true});
        break;
      }
    }
  }
  finished_meetings_.clear();

  std::stable_sort(pending_evals_.begin(), pending_evals_.end(),
                   [](const PendingEvaluation& a, const PendingEvaluation& b) {
                     return std::tie(a.agent, a.cause) < std::tie(b.agent, b.cause);
                   });
  for (const auto& ev : pending_evals_) {
    if (!world_.alignment.contains(ev.agent, ev.task)) continue;
    const double old = world_.alignment.value(ev.agent, ev.task);
    DeltaEvaluation eval;
    if (ev.meeting) {
      eval = meeting_delta();
    } else {
      const auto& th = world_.threads.at(*ev.thread);
      const auto& reply_msg = world_.sent.at(*ev.reply);
      const bool resolved = th.resolved && th.messages.back() == *ev.reply;
      if (options_.evaluator == EvaluatorKind::llm) {
        ReplyEvaluationInput in;
        in.task = &world_.graph.node(ev.task);
        in.current_af = old;
        in.original_request = world_.sent.at(th.root);
        in.reply = reply_msg;
        in.request_type = th.root_type;
        in.resolved = resolved;
        auto outcome = evaluate_reply_delta(in, *options_.evaluator_adapter);
        if (outcome.warning) warn(step, "evaluator_fallback", *outcome.warning);
        eval = std::move(outcome.evaluation);
      } else {
        eval = rule_based_delta(th.root_type, resolved);
      }
    }
    const double now = world_.alignment.apply_delta(ev.agent, ev.task, eval.delta, step, ev.cause);
    if (now > old) world_.assignments[{ev.agent, ev.task}].steps_since_af_gain = 0;
    ojson j;
    j["agent"] = ev.agent.str();
    j["task"] = ev.task.str();
    j["old"] = old;
    j["delta"] = eval.delta;
    j["new"] = now;
    j["cause"] = ev.cause;
    j["reasoning"] = eval.reasoning;
    world_.trace.append(step, TraceKind::af_update, std::move(j));
  }
  pending_evals_.clear();
}

// (7)
void Engine::stage_phase(int step) {
  const int next = step + 1;
  std::set<AgentId> reserved;
  for (auto& [mid, meeting] : world_.meetings) {
    if (meeting.status != MeetingStatus::pending || next < meeting.invite_step + 2) continue;
    std::vector<AgentId> everyone{meeting.organizer};
    everyone.insert(everyone.end(), meeting.invited.begin(), meeting.invited.end());
    const bool all_free = std::all_of(everyone.begin(), everyone.end(), [&](const AgentId& a) {
      return !world_.busy(a) && !reserved.count(a);
    });
    if (!all_free) continue;

    std::vector<AgentId> attendees{meeting.organizer};
    for (const auto& a : meeting.invited) {
      if (meeting.rsvped.count(a)) attendees.push_back(a);
    }
    std::sort(attendees.begin(), attendees.end());
    if (attendees.size() < 2) {
      meeting.status = MeetingStatus::cancelled;
      warn(step, "meeting_cancelled", mid.str() + " had fewer than two attendees");
      continue;
    }
    meeting.attendees = attendees;
    meeting.start_step = next;
    meeting.cost_hours = communication_cost(Channel::meeting, 0, static_cast<int>(attendees.size()));
    meeting.duration_steps = hours_to_steps(meeting.cost_hours, world_.clock.hours_per_step);
    reserved.insert(attendees.begin(), attendees.end());

    Message start;
    start.thread = ThreadId(mid.str());
    start.from = meeting.organizer;
    for (const auto& a : attendees) {
      if (a != meeting.organizer) start.to.push_back(a);
    }
    start.channel = Channel::meeting;
    start.type = MessageType::meeting_start;
    start.about_task = meeting.about_task;
    start.content = "Meeting " + mid.str() + " is starting.";
    start.sent_step = step;
    start.meeting = mid;
    start.participants = attendees;
    start.cost_hours = meeting.cost_hours;
    send(std::move(start), step);
  }
}

SimResult run(const Scenario& scenario, EngineOptions options) {
  return Engine(scenario, options).run();
}

}  // namespace c2c
