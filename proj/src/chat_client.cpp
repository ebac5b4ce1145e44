#include "softprove/chat_client.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "softprove/errors.hpp"

namespace softprove {

std::string render_messages(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    out += m.role;
    out += ": ";
    out += m.content;
    out += '\n';
  }
  return out;
}

MockTranscript::MockTranscript(std::vector<Entry> entries, bool strict)
    : entries_(std::move(entries)), consumed_(entries_.size(), false), strict_(strict) {}

MockTranscript::MockTranscript(MockTranscript&& other) noexcept
    : entries_(std::move(other.entries_)),
      consumed_(std::move(other.consumed_)),
      calls_(std::move(other.calls_)),
      strict_(other.strict_) {}

MockTranscript MockTranscript::from_json(std::string_view text, bool strict) {
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError({"transcript is not valid JSON"});
  if (!doc.is_array()) throw SchemaError({"transcript must be a JSON array"});
  std::vector<std::string> problems;
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "entry " + std::to_string(i);
    if (!item.is_object()) {
      problems.push_back(where + " must be an object");
      continue;
    }
    Entry e;
    bool ok = true;
    for (const char* key : {"role", "match", "response"}) {
      auto it = item.find(key);
      if (it == item.end() || !it->is_string()) {
        problems.push_back(where + ": missing or non-string '" + key + "'");
        ok = false;
      }
    }
    if (!ok) continue;
    e.role = item["role"].get<std::string>();
    e.match = item["match"].get<std::string>();
    e.response = item["response"].get<std::string>();
    entries.push_back(std::move(e));
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  return MockTranscript(std::move(entries), strict);
}

MockTranscript MockTranscript::from_file(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read transcript: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), strict);
}

std::string MockTranscript::complete(const std::vector<ChatMessage>& messages,
                                     const ChatParams& params) {
  const std::string prompt = render_messages(messages);
  std::lock_guard lock(mu_);
  std::optional<std::size_t> chosen, last;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (e.role != "*" && e.role != params.purpose) continue;
    if (prompt.find(e.match) == std::string::npos) continue;
    last = i;
    if (!consumed_[i] && !chosen) chosen = i;
  }
  if (!chosen) chosen = last;
  if (!chosen) {
    if (strict_)
      throw ClientError("mock transcript has no entry for a '" + params.purpose + "' prompt");
    calls_.push_back({params.purpose, prompt, {}});
    return {};
  }
  consumed_[*chosen] = true;
  calls_.push_back({params.purpose, prompt, entries_[*chosen].response});
  return entries_[*chosen].response;
}

std::vector<MockTranscript::Call> MockTranscript::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

}  // namespace softprove
