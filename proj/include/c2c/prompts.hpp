#pragma once

#include <optional>
#include <string>
#include <vector>

namespace c2c {

// Text payloads sent to the external model. Inputs are plain values so the
// renderers stay independent of engine state.

struct TeamMemberLine {
  std::string name;
  std::string role;
  std::vector<std::string> skills;
};

struct DecompositionPromptInput {
  std::string description;
  double estimated_hours = 0.0;
  std::vector<std::string> required_skills;
  std::vector<TeamMemberLine> team;
  std::string manager_name;
  int subtask_count = 0;
};

struct IntentionPromptInput {
  std::string agent_name;
  std::string role;
  std::string tasks_block;
  std::string message_info;
  std::string last_action_info;
};

struct EvaluationPromptInput {
  std::string task_id;
  std::string description;
  std::vector<std::string> required_skills;
  double actual_hours = 0.0;
  double estimated_hours = 0.0;
  double current_alignment = 0.0;
  std::string message_type;
  std::string from_agent;
  std::optional<std::string> original_request;
  std::string reply_content;
};

struct CompositionPromptInput {
  std::string agent_name;
  std::string message_type;
  std::string channel;
  std::vector<std::string> recipients;
  std::string task_id;
  std::string task_description;
  double progress = 0.0;
  double alignment = 0.0;
  std::string draft;
};

std::string render_decomposition_prompt(const DecompositionPromptInput& in);
std::string render_intention_prompt(const IntentionPromptInput& in);
std::string render_evaluation_prompt(const EvaluationPromptInput& in);
std::string render_composition_prompt(const CompositionPromptInput& in);

/// Python str(float) rendering: "8.0", "2.5", "0.1".
std::string python_float(double v);
/// printf-style fixed rendering with `digits` decimals.
std::string fixed(double v, int digits);

}  // namespace c2c
