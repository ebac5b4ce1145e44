#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "doctest.h"

#include <cstdlib>
#include <thread>

#include "json.hpp"
#include "softprove/chat_client.hpp"
#include "softprove/errors.hpp"

using namespace softprove;

namespace {

// Local endpoint serving canned chat-completion responses.
class FakeEndpoint {
 public:
  FakeEndpoint() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      res.set_content(
          R"({"choices":[{"message":{"role":"assistant","content":"Hypothesis: care"}}]})",
          "application/json");
    });
    server_.Post("/fail", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("boom", "text/plain");
    });
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{not json", "application/json");
    });
    server_.Post("/empty", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"choices":[]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::string last_body_;
  std::string last_auth_;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::vector<ChatMessage> hello() { return {{"system", "be brief"}, {"user", "hello"}}; }

}  // namespace

TEST_CASE("successful completion") {
  FakeEndpoint ep;
  HttpChatClient client(ep.url("/v1/chat/completions"), "secret");
  ChatParams p;
  p.purpose = "deduce";
  p.timeout = std::chrono::milliseconds(5000);
  CHECK(client.complete(hello(), p) == "Hypothesis: care");
  auto body = nlohmann::json::parse(ep.last_body_);
  CHECK(body["model"] == "gpt-3.5-turbo");
  CHECK(body["temperature"] == 0.5);
  CHECK(body["max_tokens"] == 1024);
  CHECK(body["messages"].size() == 2);
  CHECK(body["messages"][1]["content"] == "hello");
  CHECK_FALSE(body.contains("purpose"));
  CHECK(ep.last_auth_ == "Bearer secret");
}

TEST_CASE("the default path is used when the URL has none") {
  FakeEndpoint ep;
  HttpChatClient client(ep.url(""), "");
  CHECK(client.complete(hello(), {}) == "Hypothesis: care");
  CHECK(ep.last_auth_.empty());
}

TEST_CASE("endpoint failures become client errors") {
  FakeEndpoint ep;
  CHECK_THROWS_AS(HttpChatClient(ep.url("/fail"), "").complete(hello(), {}), ClientError);
  CHECK_THROWS_AS(HttpChatClient(ep.url("/garbage"), "").complete(hello(), {}), ClientError);
  CHECK_THROWS_AS(HttpChatClient(ep.url("/empty"), "").complete(hello(), {}), ClientError);
}

TEST_CASE("connection refused") {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  ChatParams p;
  p.timeout = std::chrono::milliseconds(2000);
  HttpChatClient client("http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "");
  CHECK_THROWS_AS(client.complete(hello(), p), ClientError);
}

TEST_CASE("URL validation and environment") {
  CHECK_THROWS_AS(HttpChatClient("localhost:8080", ""), ConfigError);
  CHECK_THROWS_AS(HttpChatClient("ftp://host/x", ""), ConfigError);
  ::unsetenv("SOFTPROVE_LLM_URL");
  CHECK_THROWS_AS(HttpChatClient::from_environment(), ConfigError);
  ::setenv("SOFTPROVE_LLM_URL", "http://127.0.0.1:1/v1/chat/completions", 1);
  CHECK_NOTHROW(HttpChatClient::from_environment());
  ::unsetenv("SOFTPROVE_LLM_URL");
}

TEST_CASE("mock transcript matching") {
  MockTranscript mock({{"deduce", "pain", "first"}, {"deduce", "pain", "second"}, {"*", "", "any"}});
  ChatParams p;
  p.purpose = "deduce";
  std::vector<ChatMessage> pain{{"user", "frogs feel pain"}};
  CHECK(mock.complete(pain, p) == "first");
  CHECK(mock.complete(pain, p) == "second");
  CHECK(mock.complete(pain, p) == "any");
  CHECK(mock.complete(pain, p) == "any");  // last match reused once all are consumed
  p.purpose = "abduce";
  CHECK(mock.complete(pain, p) == "any");
  REQUIRE(mock.calls().size() == 5);
  CHECK(mock.calls()[0].prompt == "user: frogs feel pain\n");

  MockTranscript strict({{"deduce", "pain", "x"}});
  CHECK_THROWS_AS(strict.complete({{"user", "joy"}}, p), ClientError);
  MockTranscript lenient({{"deduce", "pain", "x"}}, false);
  CHECK(lenient.complete({{"user", "joy"}}, p).empty());

  CHECK_THROWS_AS(MockTranscript::from_json(R"([{"role":"x"}])"), SchemaError);
  CHECK_THROWS_AS(MockTranscript::from_json("{}"), SchemaError);
  CHECK(MockTranscript::from_json(R"([{"role":"*","match":"","response":"r"}])").entries().size() == 1);
}
