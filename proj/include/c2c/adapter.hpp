#pragma once

#include <json.hpp>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c2c {

struct ChatTurn {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

/// Transport or protocol failure talking to a language model endpoint.
class AdapterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One request, one text completion. Implementations must be safe to call
/// from several threads at once.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  virtual std::string complete(std::span<const ChatTurn> turns) = 0;
};

inline constexpr std::string_view kDefaultTokenEnv = "C2C_API_TOKEN";

struct AdapterSettings {
  std::string endpoint;  // base URL, e.g. "https://api.example.com/v1"
  std::string model = "gpt-4o";
  double temperature = 0.7;
  std::string token_env = std::string(kDefaultTokenEnv);
  int timeout_seconds = 60;
};

/// Chat-completion request body: {"model", "temperature", "messages": [{"role", "content"}]}.
nlohmann::ordered_json build_chat_request(const AdapterSettings& settings, std::span<const ChatTurn> turns);

/// Pulls choices[0].message.content out of a chat-completion response body.
std::string extract_completion_text(std::string_view response_body);

/// First balanced top-level JSON object in free text (tolerates code fences and prose).
std::optional<nlohmann::json> extract_json_object(std::string_view text);

struct Endpoint {
  std::string scheme_host_port;  // "http://localhost:8080"
  std::string path_prefix;       // "/v1"
};

Endpoint parse_endpoint(std::string_view url);

class HttpChatAdapter final : public ModelAdapter {
 public:
  /// Reads the bearer token from the environment variable named in settings.
  explicit HttpChatAdapter(AdapterSettings settings);

  std::string complete(std::span<const ChatTurn> turns) override;

  /// True when the endpoint host answers any HTTP request.
  [[nodiscard]] bool reachable() const;

 private:
  AdapterSettings settings_;
  Endpoint endpoint_;
  std::string token_;
};

}  // namespace c2c
