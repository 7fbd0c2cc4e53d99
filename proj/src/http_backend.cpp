#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "tabtext/errors.hpp"
#include "tabtext/gateway.hpp"

namespace tabtext {

namespace {

struct ParsedUrl {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // e.g. /v1
};

ParsedUrl split_base_url(const std::string& base_url) {
  const std::size_t scheme = base_url.find("://");
  if (scheme == std::string::npos) throw ConfigError("base_url must include a scheme: " + base_url);
  const std::size_t path = base_url.find('/', scheme + 3);
  ParsedUrl out;
  if (path == std::string::npos) {
    out.origin = base_url;
  } else {
    out.origin = base_url.substr(0, path);
    out.path_prefix = base_url.substr(path);
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
  }
  return out;
}

}  // namespace

RawBackendResult http_chat_completion(const BackendConfig& config,
                                        const ChatRequest& request) {
  const ParsedUrl url = split_base_url(*config.base_url);

  nlohmann::json payload = {
      {"model", config.model_name},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
      {"messages", nlohmann::json::array()},
  };
  if (!request.system_prompt.empty()) {
    payload["messages"].push_back({{"role", "system"}, {"content", request.system_prompt}});
  }
  payload["messages"].push_back({{"role", "user"}, {"content", request.user_prompt}});

  httplib::Client client(url.origin);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(300, 0);

  httplib::Headers headers;
  if (const char* key = std::getenv(config.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  auto result = client.Post(url.path_prefix + "/chat/completions", headers, payload.dump(),
                            "application/json");
  if (!result) {
    return {0, "", "transport error: " + httplib::to_string(result.error())};
  }
  if (result->status != 200) {
    return {result->status, "", result->body.substr(0, 200)};
  }

  auto body = nlohmann::json::parse(result->body, nullptr, false);
  if (body.is_discarded() || !body.contains("choices") || body["choices"].empty() ||
      !body["choices"][0].contains("message")) {
    return {0, "", "malformed chat-completion response body"};
  }
  return {200, body["choices"][0]["message"].value("content", ""), ""};
}

}  // namespace tabtext
