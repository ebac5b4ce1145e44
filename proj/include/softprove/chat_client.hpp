#pragma once

#include <chrono>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace softprove {

struct ChatMessage {
  std::string role;  ///< "system", "user" or "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatParams {
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.5;
  int max_tokens = 1024;
  std::chrono::milliseconds timeout{60000};
  /// Prompt role of the request ("semantic", "abduce", ...). Not sent over
  /// the wire; the mock uses it as part of its lookup key.
  std::string purpose;
};

/// Chat-completion endpoint. Implementations must tolerate concurrent calls.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// Throws ClientError on transport or protocol failure.
  virtual std::string complete(const std::vector<ChatMessage>& messages,
                               const ChatParams& params) = 0;
};

/// Messages joined as "<role>: <content>" lines; the text mock keys match.
std::string render_messages(const std::vector<ChatMessage>& messages);

/// Replays canned replies. An entry answers a request when its role equals the
/// request purpose (or is "*") and its match text occurs in the rendered
/// messages. The first unconsumed such entry is consumed; once all are
/// consumed the last one is reused.
class MockTranscript : public ChatClient {
 public:
  struct Entry {
    std::string role;
    std::string match;
    std::string response;
  };

  struct Call {
    std::string purpose;
    std::string prompt;
    std::string response;
  };

  explicit MockTranscript(std::vector<Entry> entries, bool strict = true);

  /// JSON array of {role, match, response}. Throws SchemaError.
  static MockTranscript from_json(std::string_view text, bool strict = true);
  static MockTranscript from_file(const std::string& path, bool strict = true);

  /// In strict mode an unmatched request throws ClientError; otherwise it
  /// gets an empty reply.
  std::string complete(const std::vector<ChatMessage>& messages, const ChatParams& params) override;

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Call> calls() const;

  MockTranscript(MockTranscript&& other) noexcept;

 private:
  std::vector<Entry> entries_;
  std::vector<bool> consumed_;
  std::vector<Call> calls_;
  bool strict_;
  mutable std::mutex mu_;
};

/// OpenAI-style chat-completions over HTTP(S).
class HttpChatClient : public ChatClient {
 public:
  /// `url` is the full endpoint, e.g. https://api.example.com/v1/chat/completions.
  HttpChatClient(std::string url, std::string api_key);

  /// Reads SOFTPROVE_LLM_URL and SOFTPROVE_LLM_KEY. Throws ConfigError when
  /// the URL is unset.
  static HttpChatClient from_environment();

  std::string complete(const std::vector<ChatMessage>& messages, const ChatParams& params) override;

 private:
  std::string origin_;  ///< scheme://host[:port]
  std::string path_;
  std::string api_key_;
};

}  // namespace softprove
