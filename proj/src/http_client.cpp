#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>

#include "json.hpp"
#include "softprove/chat_client.hpp"
#include "softprove/errors.hpp"

namespace softprove {

HttpChatClient::HttpChatClient(std::string url, std::string api_key) : api_key_(std::move(api_key)) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("LLM URL lacks a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported LLM URL scheme: " + scheme);
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/v1/chat/completions" : url.substr(path_start);
}

HttpChatClient HttpChatClient::from_environment() {
  const char* url = std::getenv("SOFTPROVE_LLM_URL");
  if (!url || !*url) throw ConfigError("SOFTPROVE_LLM_URL is not set");
  const char* key = std::getenv("SOFTPROVE_LLM_KEY");
  return HttpChatClient(url, key ? key : "");
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages,
                                     const ChatParams& params) {
  nlohmann::json body = {{"model", params.model},
                         {"temperature", params.temperature},
                         {"max_tokens", params.max_tokens},
                         {"messages", nlohmann::json::array()}};
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});

  // One client per request: httplib clients are not safe to share.
  httplib::Client client(origin_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(params.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(params.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw ClientError("LLM request failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw ClientError("LLM endpoint returned HTTP " + std::to_string(res->status));
  auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw ClientError("LLM endpoint returned invalid JSON");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ClientError("LLM response lacks choices[0].message.content");
  }
}

}  // namespace softprove
