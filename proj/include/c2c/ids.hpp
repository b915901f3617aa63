#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace c2c {

// Compares identifiers so that embedded digit runs order numerically:
// "W2" < "W10", "T1.2" < "T1.10".
std::strong_ordering natural_compare(std::string_view a, std::string_view b) noexcept;

template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}
  explicit Id(const char* v) : value(v) {}

  [[nodiscard]] const std::string& str() const noexcept { return value; }
  [[nodiscard]] bool empty() const noexcept { return value.empty(); }

  friend bool operator==(const Id& a, const Id& b) noexcept { return a.value == b.value; }
  friend std::strong_ordering operator<=>(const Id& a, const Id& b) noexcept {
    return natural_compare(a.value, b.value);
  }
  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

using AgentId = Id<struct AgentTag>;
using TaskId = Id<struct TaskTag>;
using MessageId = Id<struct MessageTag>;
using ThreadId = Id<struct ThreadTag>;
using MeetingId = Id<struct MeetingTag>;

}  // namespace c2c

template <class Tag>
struct std::hash<c2c::Id<Tag>> {
  std::size_t operator()(const c2c::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
