#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace c2c {

enum class TraceKind { action, message_sent, message_delivered, af_update, progress, task_done, warning };

std::string_view to_string(TraceKind k) noexcept;
std::optional<TraceKind> parse_trace_kind(std::string_view s);

/// One trace record. Serialized as a single JSON object whose first keys are
/// always "seq", "step", "kind", followed by the payload keys in insertion order.
struct TraceEvent {
  std::uint64_t seq = 0;
  int step = 0;
  TraceKind kind = TraceKind::action;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();

  [[nodiscard]] std::string to_json_line() const;
  static TraceEvent from_json_line(std::string_view line);
};

/// Append-only event log ordered by (step, seq).
class TraceLog {
 public:
  const TraceEvent& append(int step, TraceKind kind, nlohmann::ordered_json payload);

  [[nodiscard]] const std::vector<TraceEvent>& events() const noexcept { return events_; }
  [[nodiscard]] bool empty() const noexcept { return events_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return events_.size(); }

  void write_jsonl(std::ostream& os) const;
  [[nodiscard]] std::string to_jsonl() const;
  static TraceLog read_jsonl(std::istream& is);

 private:
  std::vector<TraceEvent> events_;
};

/// 64-bit FNV-1a, used to compare trace files byte-for-byte.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace c2c
