#include <c2c/trace.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace c2c {

std::string_view to_string(TraceKind k) noexcept {
  switch (k) {
    case TraceKind::action: return "action";
    case TraceKind::message_sent: return "message_sent";
    case TraceKind::message_delivered: return "message_delivered";
    case TraceKind::af_update: return "af_update";
    case TraceKind::progress: return "progress";
    case TraceKind::task_done: return "task_done";
    case TraceKind::warning: return "warning";
  }
  return "unknown";
}

std::optional<TraceKind> parse_trace_kind(std::string_view s) {
  for (auto k : {TraceKind::action, TraceKind::message_sent, TraceKind::message_delivered, TraceKind::af_update,
                 TraceKind::progress, TraceKind::task_done, TraceKind::warning}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string TraceEvent::to_json_line() const {
  nlohmann::ordered_json j;
  j["seq"] = seq;
  j["step"] = step;
  j["kind"] = std::string(to_string(kind));
  for (const auto& [k, v] : payload.items()) j[k] = v;
  return j.dump();
}

TraceEvent TraceEvent::from_json_line(std::string_view line) {
  auto j = nlohmann::ordered_json::parse(line);
  TraceEvent e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.step = j.at("step").get<int>();
  const auto kind = parse_trace_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("unknown trace kind in line: " + std::string(line));
  e.kind = *kind;
  for (const auto& [k, v] : j.items()) {
    if (k != "seq" && k != "step" && k != "kind") e.payload[k] = v;
  }
  return e;
}

const TraceEvent& TraceLog::append(int step, TraceKind kind, nlohmann::ordered_json payload) {
  if (!events_.empty() && step < events_.back().step) {
    throw std::logic_error("trace events must be appended in step order");
  }
  TraceEvent e;
  e.seq = events_.size();
  e.step = step;
  e.kind = kind;
  e.payload = std::move(payload);
  events_.push_back(std::move(e));
  return events_.back();
}

void TraceLog::write_jsonl(std::ostream& os) const {
  for (const auto& e : events_) os << e.to_json_line() << '\n';
}

std::string TraceLog::to_jsonl() const {
  std::ostringstream os;
  write_jsonl(os);
  return os.str();
}

TraceLog TraceLog::read_jsonl(std::istream& is) {
  TraceLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      log.events_.push_back(TraceEvent::from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace c2c
