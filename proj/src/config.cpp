#include <c2c/config.hpp>

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace c2c {

namespace {

std::string located(const std::string& source, int line, int column, const std::string& message) {
  if (line <= 0) return source + ": " + message;
  return source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(ConfigError::Code code, const YAML::Node& at, const std::string& message) const {
    const auto mark = at.Mark();
    const bool known = !mark.is_null();
    throw ConfigError(code, source_, known ? mark.line + 1 : 0, known ? mark.column + 1 : 0, message);
  }

  YAML::Node require(const YAML::Node& map, const char* key) const {
    auto n = map[key];
    if (!n) fail(ConfigError::Code::missing_field, map, std::string("missing field '") + key + "'");
    return n;
  }

  void only_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed) const {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(ConfigError::Code::unknown_key, kv.first, "unknown key '" + key + "'");
      }
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const char* what) const {
    if (!n.IsScalar()) fail(ConfigError::Code::bad_value, n, std::string(what) + " must be a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(ConfigError::Code::bad_value, n, std::string("invalid ") + what + " '" + n.Scalar() + "'");
    }
  }

  std::vector<std::string> string_list(const YAML::Node& n, const char* what) const {
    if (!n.IsSequence()) fail(ConfigError::Code::bad_value, n, std::string(what) + " must be a list");
    std::vector<std::string> out;
    for (const auto& item : n) out.push_back(to_lower(scalar<std::string>(item, what)));
    return out;
  }

  void check_pool(const std::set<std::string>& pool, const YAML::Node& list, const std::vector<std::string>& skills) const {
    if (pool.empty()) return;
    for (std::size_t i = 0; i < skills.size(); ++i) {
      if (!pool.count(skills[i])) {
        fail(ConfigError::Code::unknown_skill, list[i], "unknown skill '" + skills[i] + "'");
      }
    }
  }

 private:
  std::string source_;
};

bool parse_count(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

ConfigError::ConfigError(Code code, const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(located(source, line, column, message)), code_(code), line_(line), column_(column) {}

std::vector<AgentProfile> expand_team(std::string_view shorthand, const std::vector<std::string>& skill_pool) {
  const auto plus = shorthand.find('+');
  int managers = 0;
  int workers = 0;
  if (plus == std::string_view::npos || shorthand.size() < 4 || shorthand[plus - 1] != 'M' || shorthand.back() != 'W' ||
      !parse_count(shorthand.substr(0, plus - 1), managers) ||
      !parse_count(shorthand.substr(plus + 1, shorthand.size() - plus - 2), workers) || managers < 0 || workers < 0) {
    throw std::invalid_argument("team shorthand must look like 1M+4W, got '" + std::string(shorthand) + "'");
  }
  if (skill_pool.empty()) throw std::invalid_argument("team shorthand needs a non-empty skill pool");

  const std::size_t n = skill_pool.size();
  std::vector<AgentProfile> team;
  for (int i = 1; i <= managers; ++i) {
    AgentProfile a;
    a.id = AgentId("M" + std::to_string(i));
    a.name = managers == 1 ? "Manager" : "Manager " + std::to_string(i);
    a.role = Role::manager;
    for (std::size_t j = 0; j < std::min<std::size_t>(2, n); ++j) a.skills.insert(skill_pool[j]);
    team.push_back(std::move(a));
  }
  std::size_t cursor = 0;
  for (int k = 1; k <= workers; ++k) {
    AgentProfile a;
    a.id = AgentId("W" + std::to_string(k));
    a.name = "Worker " + std::to_string(k);
    a.role = Role::worker;
    const std::size_t count = std::min<std::size_t>(2 + static_cast<std::size_t>(k - 1) % 3, n);
    for (std::size_t j = 0; j < count; ++j) a.skills.insert(skill_pool[(cursor + j) % n]);
    cursor = (cursor + count) % n;
    team.push_back(std::move(a));
  }
  return team;
}

Scenario parse_scenario_text(std::string_view text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(ConfigError::Code::malformed, source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  Reader r(source);
  if (!root.IsMap()) r.fail(ConfigError::Code::malformed, root, "scenario must be a mapping");
  r.only_keys(root, {"complexity", "seed", "policy", "evaluator", "hours_per_step", "max_steps", "skill_pool", "team",
                     "tasks", "heuristic"});

  Scenario s;
  if (auto n = root["complexity"]) s.complexity = r.scalar<std::string>(n, "complexity");
  if (auto n = root["seed"]) s.seed = r.scalar<std::uint64_t>(n, "seed");
  if (auto n = root["policy"]) {
    auto p = parse_policy(r.scalar<std::string>(n, "policy"));
    if (!p) r.fail(ConfigError::Code::bad_value, n, "unknown policy '" + n.Scalar() + "'");
    s.policy = *p;
  }
  if (auto n = root["evaluator"]) {
    auto e = parse_evaluator(r.scalar<std::string>(n, "evaluator"));
    if (!e) r.fail(ConfigError::Code::bad_value, n, "unknown evaluator '" + n.Scalar() + "'");
    s.evaluator = *e;
  }
  if (auto n = root["hours_per_step"]) {
    s.hours_per_step = r.scalar<double>(n, "hours_per_step");
    if (!(s.hours_per_step > 0.0)) r.fail(ConfigError::Code::bad_value, n, "hours_per_step must be positive");
  }
  if (auto n = root["max_steps"]) {
    s.max_steps = r.scalar<int>(n, "max_steps");
    if (s.max_steps <= 0) r.fail(ConfigError::Code::bad_value, n, "max_steps must be positive");
  }

  if (auto h = root["heuristic"]) {
    if (!h.IsMap()) r.fail(ConfigError::Code::malformed, h, "heuristic must be a mapping");
    r.only_keys(h, {"af_threshold", "stuck_steps", "blocked_for_meeting", "report_milestone", "report_horizon_hours"});
    auto& t = s.heuristic;
    auto positive = [&](const char* key, auto& field) {
      if (auto n = h[key]) {
        field = r.scalar<std::remove_reference_t<decltype(field)>>(n, key);
        if (!(field > 0)) r.fail(ConfigError::Code::bad_value, n, std::string(key) + " must be positive");
      }
    };
    positive("af_threshold", t.af_threshold);
    positive("stuck_steps", t.stuck_steps);
    positive("blocked_for_meeting", t.blocked_for_meeting);
    positive("report_milestone", t.report_milestone);
    positive("report_horizon_hours", t.report_horizon_hours);
    if (t.af_threshold > 1.0) {
      r.fail(ConfigError::Code::bad_value, h["af_threshold"], "af_threshold must not exceed 1");
    }
    if (t.report_milestone >= 1.0) {
      r.fail(ConfigError::Code::bad_value, h["report_milestone"], "report_milestone must be below 1");
    }
  }

  const auto tasks = r.require(root, "tasks");
  if (!tasks.IsSequence() || tasks.size() == 0) r.fail(ConfigError::Code::bad_value, tasks, "tasks must be a non-empty list");
  if (auto n = root["skill_pool"]) s.skill_pool = r.string_list(n, "skill_pool");
  std::set<std::string> pool(s.skill_pool.begin(), s.skill_pool.end());

  for (const auto& t : tasks) {
    if (!t.IsMap()) r.fail(ConfigError::Code::malformed, t, "task must be a mapping");
    r.only_keys(t, {"description", "hours", "skills"});
    TaskSpec spec;
    spec.description = r.scalar<std::string>(r.require(t, "description"), "description");
    const auto hours = r.require(t, "hours");
    spec.estimated_hours = r.scalar<double>(hours, "hours");
    if (!(spec.estimated_hours > 0.0)) r.fail(ConfigError::Code::bad_value, hours, "non-positive effort");
    const auto skills = r.require(t, "skills");
    spec.required_skills = r.string_list(skills, "skills");
    r.check_pool(pool, skills, spec.required_skills);
    s.tasks.push_back(std::move(spec));
  }

  const auto team = r.require(root, "team");
  if (team.IsScalar()) {
    if (s.skill_pool.empty()) {
      for (const auto& t : s.tasks) {
        for (const auto& k : t.required_skills) {
          if (std::find(s.skill_pool.begin(), s.skill_pool.end(), k) == s.skill_pool.end()) s.skill_pool.push_back(k);
        }
      }
    }
    try {
      s.team = expand_team(team.Scalar(), s.skill_pool);
    } catch (const std::invalid_argument& e) {
      r.fail(ConfigError::Code::bad_value, team, e.what());
    }
  } else if (team.IsSequence()) {
    for (const auto& m : team) {
      if (!m.IsMap()) r.fail(ConfigError::Code::malformed, m, "team member must be a mapping");
      r.only_keys(m, {"id", "name", "role", "skills"});
      AgentProfile a;
      a.id = AgentId(r.scalar<std::string>(r.require(m, "id"), "id"));
      a.name = m["name"] ? r.scalar<std::string>(m["name"], "name") : a.id.str();
      const auto role = r.require(m, "role");
      auto parsed = parse_role(r.scalar<std::string>(role, "role"));
      if (!parsed) r.fail(ConfigError::Code::bad_value, role, "unknown role '" + role.Scalar() + "'");
      a.role = *parsed;
      const auto skills = r.require(m, "skills");
      const auto list = r.string_list(skills, "skills");
      r.check_pool(pool, skills, list);
      a.skills.insert(list.begin(), list.end());
      s.team.push_back(std::move(a));
    }
  } else {
    r.fail(ConfigError::Code::bad_value, team, "team must be a shorthand like 1M+4W or a list of agents");
  }

  try {
    return validate_scenario(std::move(s));
  } catch (const ValidationError& e) {
    const auto code = e.code() == ValidationError::Code::unknown_skill ? ConfigError::Code::unknown_skill
                                                                       : ConfigError::Code::bad_value;
    throw ConfigError(code, source, 0, 0, e.what());
  }
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigError::Code::io, path.string(), 0, 0, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.string());
}

std::string emit_scenario(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "complexity" << YAML::Value << s.complexity;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "policy" << YAML::Value << std::string(to_string(s.policy));
  out << YAML::Key << "evaluator" << YAML::Value << std::string(to_string(s.evaluator));
  out << YAML::Key << "hours_per_step" << YAML::Value << s.hours_per_step;
  out << YAML::Key << "max_steps" << YAML::Value << s.max_steps;
  if (s.heuristic != HeuristicThresholds{}) {
    const auto& t = s.heuristic;
    out << YAML::Key << "heuristic" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "af_threshold" << YAML::Value << t.af_threshold;
    out << YAML::Key << "stuck_steps" << YAML::Value << t.stuck_steps;
    out << YAML::Key << "blocked_for_meeting" << YAML::Value << t.blocked_for_meeting;
    out << YAML::Key << "report_milestone" << YAML::Value << t.report_milestone;
    out << YAML::Key << "report_horizon_hours" << YAML::Value << t.report_horizon_hours;
    out << YAML::EndMap;
  }
  if (!s.skill_pool.empty()) {
    out << YAML::Key << "skill_pool" << YAML::Value << YAML::Flow << s.skill_pool;
  }
  out << YAML::Key << "team" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : s.team) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << a.id.str();
    out << YAML::Key << "name" << YAML::Value << a.name;
    out << YAML::Key << "role" << YAML::Value << std::string(to_string(a.role));
    out << YAML::Key << "skills" << YAML::Value << YAML::Flow
        << std::vector<std::string>(a.skills.begin(), a.skills.end());
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "tasks" << YAML::Value << YAML::BeginSeq;
  for (const auto& t : s.tasks) {
    out << YAML::BeginMap;
    out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << t.description;
    out << YAML::Key << "hours" << YAML::Value << t.estimated_hours;
    out << YAML::Key << "skills" << YAML::Value << YAML::Flow << t.required_skills;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace c2c
