#include <c2c/prompts.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <string_view>

namespace c2c {

namespace {

// Placeholders are written as <<name>> so JSON braces in the templates stay literal.
std::string substitute(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("<<", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const auto close = tmpl.find(">>", open + 2);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = values.find(key);
    out.append(it != values.end() ? it->second : "<<" + key + ">>");
    pos = close + 2;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

constexpr std::string_view kDecompositionTemplate =
    R"PROMPT(Decompose this task into subtasks:

Task: <<description>>
Estimated hours: <<estimated_hours>>
Required skills: <<skills>>

Team members:
<<team>>
<<manager_note>>
Create <<teamsize>> subtasks that:
1. Can be worked on independently or with minimal dependencies
2. Match team members' skills
3. Are reasonably sized (total hours should be close to the original task's estimated hours)
4. Cover all aspects of the original task 

Return JSON:
{
    "subtasks": [
       {
            "description": "Clear description of what needs to be done",
            "estimated_hours": number,
            "required_skills": ["skill1", "skill2"],
            "suggested_assignee": "team member_name (can be any team member including Manager)",
            "dependencies": []  // indices of subtasks this depends on
        }
    ],
    "decomposition_rationale": "Brief explanation of your decomposition strategy"
})PROMPT";

constexpr std::string_view kIntentionTemplate =
    R"PROMPT(You are <<name>>, a <<role>>.
        
Current situation:
Tasks:
<<tasks>>
Note: Alignment affects work efficiency.(max: 1.0)
<<message_info>>
<<last_action_info>>

Analyze your situation and choose your primary intention for this step:

1. CONTINUE_TASK - Continue working on current tasks
2. CHECK_MESSAGES - Check and potentially respond to messages
3. REQUEST_HELP - Ask for other agents' help
4. NEED_CLARIFICATION - Need clarification on task requirements
5. REPORT_PROGRESS - Report progress to manager
6. SCHEDULE_MEETING - Schedule a meeting

IMPORTANT Decision Factors:
- If has MEETING_START: Almost always CHECK_MESSAGES (meeting is starting!)
- If has MEETING_INVITE: Strongly consider CHECK_MESSAGES (need to RSVP)
- If stuck on task for long: Consider REQUEST_HELP or NEED_CLARIFICATION
- Balance responsiveness with productivity

Return JSON: {"intention": "INTENTION_NAME", "reasoning": "explanation"})PROMPT";

constexpr std::string_view kEvaluationTemplate =
    R"PROMPT(You are evaluating how much a received message helps an worker understand their task better.

Task Information:
- Task ID: <<task_id>>
- Description: <<description>>
- Required Skills: <<skills>>
- Current Progress: <<actual_hours>>/<<estimated_hours>> hours
- Current Alignment Factor: <<alignment>> (<<alignment_pct>>% understanding)

Message Type: <<message_type>>
From Agent: <<from_agent>>

<<request_heading>>
<<request_content>>

Reply Received:
<<reply>>

Alignment Factor Guidelines:
- Range: 0.01 (1% understanding) to 1.0 (100% understanding)
- Current value: <<alignment>>
- Alignment can increase OR decrease based on communication quality
- Clear and helpful communication should improve understanding
- Confusing, contradictory, or misleading information may reduce understanding
- Consider the overall impact on task clarity and execution confidence

Consider:
1. How directly the reply addresses the original request/confusion
2. How actionable and specific the information is
3. Whether critical blockers were resolved
4. The completeness of the response
5. Diminishing returns (harder to improve as alignment approaches 1.0)

Return a JSON response:
{
    "new_alignment_factor": <float between 0.01 and 1.0>,
    "change": <float, positive for increase, negative for decrease>,
    "reasoning": "<brief explanation of why this change in understanding>"
})PROMPT";

constexpr std::string_view kCompositionTemplate =
    R"PROMPT(You are <<name>>. Write the body of a <<message_type>> message sent by <<channel>> to <<recipients>>.

Task <<task_id>>: <<description>>
Progress: <<progress>>%
Current Alignment Factor: <<alignment>>

Facts to convey:
<<draft>>

Be informative and actionable so the recipients can help effectively. Reply with the message text only.)PROMPT";

}  // namespace

std::string python_float(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e16) return fixed(v, 1);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string render_decomposition_prompt(const DecompositionPromptInput& in) {
  std::vector<std::string> team_lines;
  for (const auto& m : in.team) {
    team_lines.push_back("- " + m.name + " (" + m.role + "): " + join(m.skills, ", "));
  }
  const std::string manager_note =
      in.manager_name.empty() ? std::string()
                              : "Note: " + in.manager_name +
                                    " is the manager and coordinates the team; assign work to the manager only "
                                    "when their skills are essential.\n";
  return substitute(kDecompositionTemplate,
                    {{"description", in.description},
                     {"estimated_hours", python_float(in.estimated_hours)},
                     {"skills", join(in.required_skills, ", ")},
                     {"team", join(team_lines, "\n")},
                     {"manager_note", manager_note},
                     {"teamsize", std::to_string(in.subtask_count)}});
}

std::string render_intention_prompt(const IntentionPromptInput& in) {
  return substitute(kIntentionTemplate, {{"name", in.agent_name},
                                         {"role", in.role},
                                         {"tasks", in.tasks_block},
                                         {"message_info", in.message_info},
                                         {"last_action_info", in.last_action_info}});
}

std::string render_evaluation_prompt(const EvaluationPromptInput& in) {
  return substitute(
      kEvaluationTemplate,
      {{"task_id", in.task_id},
       {"description", in.description},
       {"skills", in.required_skills.empty() ? std::string("Not specified") : join(in.required_skills, ", ")},
       {"actual_hours", fixed(in.actual_hours, 1)},
       {"estimated_hours", fixed(in.estimated_hours, 1)},
       {"alignment", fixed(in.current_alignment, 2)},
       {"alignment_pct", fixed(in.current_alignment * 100.0, 0)},
       {"message_type", in.message_type.empty() ? std::string("Unknown") : in.message_type},
       {"from_agent", in.from_agent},
       {"request_heading", in.original_request ? "Original Request (sent by me):" : "Context:"},
       {"request_content", in.original_request
                               ? *in.original_request
                               : std::string("This is a proactive message or the original request is not available.")},
       {"reply", in.reply_content}});
}

std::string render_composition_prompt(const CompositionPromptInput& in) {
  return substitute(kCompositionTemplate, {{"name", in.agent_name},
                                           {"message_type", in.message_type},
                                           {"channel", in.channel},
                                           {"recipients", join(in.recipients, ", ")},
                                           {"task_id", in.task_id},
                                           {"description", in.task_description},
                                           {"progress", fixed(in.progress * 100.0, 0)},
                                           {"alignment", fixed(in.alignment, 2)},
                                           {"draft", in.draft}});
}

}  // namespace c2c
