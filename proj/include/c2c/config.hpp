#pragma once

#include <c2c/core.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c2c {

/// Scenario file problem with a 1-based source location (0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  enum class Code { malformed, missing_field, unknown_key, bad_value, unknown_skill, io };

  ConfigError(Code code, const std::string& source, int line, int column, const std::string& message);

  [[nodiscard]] Code code() const noexcept { return code_; }
  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int column() const noexcept { return column_; }

 private:
  Code code_;
  int line_;
  int column_;
};

/// Expands "NM+KW" into N managers (M1..MN) and K workers (W1..WK).
/// Managers take the first two pool skills. Worker k takes 2 + (k-1) mod 3
/// consecutive skills, continuing around the pool from where worker k-1 stopped.
std::vector<AgentProfile> expand_team(std::string_view shorthand, const std::vector<std::string>& skill_pool);

/// Parses YAML scenario text and validates it.
Scenario parse_scenario_text(std::string_view text, const std::string& source = "<scenario>");
Scenario parse_scenario(const std::filesystem::path& path);

/// Writes a scenario with an explicit team; parse_scenario_text(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& scenario);

}  // namespace c2c
