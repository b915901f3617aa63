#include <c2c/adapter.hpp>

#include <httplib.h>

#include <cstdlib>

namespace c2c {

nlohmann::ordered_json build_chat_request(const AdapterSettings& settings, std::span<const ChatTurn> turns) {
  nlohmann::ordered_json body;
  body["model"] = settings.model;
  body["temperature"] = settings.temperature;
  auto messages = nlohmann::ordered_json::array();
  for (const auto& t : turns) {
    nlohmann::ordered_json m;
    m["role"] = t.role;
    m["content"] = t.content;
    messages.push_back(std::move(m));
  }
  body["messages"] = std::move(messages);
  return body;
}

std::string extract_completion_text(std::string_view response_body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(response_body);
  } catch (const nlohmann::json::exception& e) {
    throw AdapterError(std::string("response is not JSON: ") + e.what());
  }
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty()) {
    throw AdapterError("response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    throw AdapterError("response choice has no message content");
  }
  return first["message"]["content"].get<std::string>();
}

std::optional<nlohmann::json> extract_json_object(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        auto parsed = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) return parsed;
        break;
      }
    }
  }
  return std::nullopt;
}

Endpoint parse_endpoint(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw AdapterError("endpoint must include a scheme: " + std::string(url));
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw AdapterError("unsupported endpoint scheme: " + std::string(scheme));
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.scheme_host_port = std::string(url.substr(0, path_start));
  if (path_start != std::string_view::npos) {
    e.path_prefix = std::string(url.substr(path_start));
    while (!e.path_prefix.empty() && e.path_prefix.back() == '/') e.path_prefix.pop_back();
  }
  return e;
}

HttpChatAdapter::HttpChatAdapter(AdapterSettings settings)
    : settings_(std::move(settings)), endpoint_(parse_endpoint(settings_.endpoint)) {
  if (const char* tok = std::getenv(settings_.token_env.c_str())) token_ = tok;
}

std::string HttpChatAdapter::complete(std::span<const ChatTurn> turns) {
  httplib::Client client(endpoint_.scheme_host_port);
  client.set_connection_timeout(settings_.timeout_seconds);
  client.set_read_timeout(settings_.timeout_seconds);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  const auto body = build_chat_request(settings_, turns).dump();
  auto res = client.Post(endpoint_.path_prefix + "/chat/completions", headers, body, "application/json");
  if (!res) throw AdapterError("transport failure: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw AdapterError("endpoint returned HTTP " + std::to_string(res->status));
  }
  return extract_completion_text(res->body);
}

bool HttpChatAdapter::reachable() const {
  httplib::Client client(endpoint_.scheme_host_port);
  client.set_connection_timeout(5);
  client.set_read_timeout(5);
  auto res = client.Get(endpoint_.path_prefix.empty() ? "/" : endpoint_.path_prefix);
  return static_cast<bool>(res);
}

}  // namespace c2c
