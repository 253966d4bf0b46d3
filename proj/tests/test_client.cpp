#include <catch2/catch_amalgamated.hpp>

#include "audioeval/client.hpp"
#include "audioeval/mock_server.hpp"
#include "test_support.hpp"

using namespace audioeval;
using client::ChatMessage;
using client::ContentPart;

namespace {

config::EndpointSpec endpoint_for(const std::string& base_url, double timeout_s = 5.0) {
  config::EndpointSpec e;
  e.name = "ep";
  e.base_url = base_url;
  e.model_id = "test-model";
  e.api_key_env = "";
  e.capacity = 4;
  e.retry_limit = 0;
  e.timeout_s = timeout_s;
  return e;
}

}  // namespace

TEST_CASE("render_template") {
  CHECK(client::render_template("Transcribe: {text}", {{"text", "hi"}}) ==
        "Transcribe: hi");
  CHECK(client::render_template("{a}{b}", {{"a", "x"}, {"b", "y"}}) == "xy");
  CHECK(client::render_template("no placeholders", {}) == "no placeholders");
  CHECK(client::render_template("stray { brace }", {}) == "stray { brace }");
  CHECK_THROWS_AS(client::render_template("{question}", {{"text", "hi"}}),
                  TemplateError);
}

TEST_CASE("build_request shapes") {
  config::EffectiveSettings settings;
  settings.temperature = 0.25;
  settings.max_tokens = 64;

  SECTION("text-only turn, empty history") {
    std::vector<ChatMessage> messages = {ChatMessage::text_message("user", "hello")};
    auto body = client::build_request(messages, settings, "m");
    CHECK(body["model"] == "m");
    CHECK(body["temperature"] == 0.25);
    CHECK(body["max_tokens"] == 64);
    REQUIRE(body["messages"].size() == 1);
    const auto& msg = body["messages"][0];
    CHECK(msg["role"] == "user");
    REQUIRE(msg["content"].is_array());
    REQUIRE(msg["content"].size() == 1);
    CHECK(msg["content"][0]["type"] == "text");
    CHECK(msg["content"][0]["text"] == "hello");
  }

  SECTION("audio turn with history") {
    ChatMessage user;
    user.role = "user";
    user.parts.push_back(ContentPart::make_text("listen"));
    user.parts.push_back(ContentPart::make_audio("QUJD"));
    std::vector<ChatMessage> messages = {
        ChatMessage::text_message("user", "earlier question"),
        ChatMessage::text_message("assistant", "earlier answer"), user};
    auto body = client::build_request(messages, settings, "m");
    REQUIRE(body["messages"].size() == 3);
    CHECK(body["messages"][1]["role"] == "assistant");
    CHECK(body["messages"][1]["content"] == "earlier answer");  // plain string
    const auto& last = body["messages"][2];
    REQUIRE(last["content"].size() == 2);
    CHECK(last["content"][1]["type"] == "input_audio");
    CHECK(last["content"][1]["input_audio"]["data"] == "QUJD");
    CHECK(last["content"][1]["input_audio"]["format"] == "wav");
  }

  SECTION("byte-identical for identical inputs") {
    std::vector<ChatMessage> messages = {ChatMessage::text_message("user", "x")};
    auto a = client::build_request(messages, settings, "m").dump();
    auto b = client::build_request(messages, settings, "m").dump();
    CHECK(a == b);
  }

  SECTION("empty parts rejected") {
    std::vector<ChatMessage> messages = {{"user", {}}};
    CHECK_THROWS(client::build_request(messages, settings, "m"));
  }
}

TEST_CASE("retryability is a pure function of the status code") {
  const std::pair<int, bool> table[] = {
      {500, true},  {502, true},  {503, true}, {504, true}, {599, true},
      {429, true},  {400, false}, {401, false}, {403, false}, {404, false},
      {408, false}, {410, false}, {418, false}, {422, false}, {451, false},
  };
  for (auto [code, want] : table) {
    INFO("status " << code);
    CHECK(client::is_retryable_status(code) == want);
  }
}

TEST_CASE("parse_chat_response") {
  CHECK(client::parse_chat_response(
            R"({"choices":[{"message":{"content":"hi"},"finish_reason":"stop"}]})")
            .text == "hi");
  auto r = client::parse_chat_response(
      R"({"choices":[{"message":{"content":[{"type":"text","text":"a"},{"type":"text","text":"b"}]}}],"usage":{"total_tokens":7}})");
  CHECK(r.text == "ab");
  CHECK(r.usage_tokens == 7);
  CHECK_THROWS_AS(client::parse_chat_response("not json"), DecodeError);
  CHECK_THROWS_AS(client::parse_chat_response(R"({"choices":[]})"), DecodeError);
  CHECK_THROWS_AS(client::parse_chat_response(R"({"choices":[{"message":{}}]})"),
                  DecodeError);
}

TEST_CASE("send_request against the mock server") {
  mock::MockBehavior behavior;
  mock::MockServer server(behavior);
  auto ep = endpoint_for(server.base_url());
  config::EffectiveSettings settings;

  SECTION("echo 200 path") {
    std::vector<ChatMessage> messages = {ChatMessage::text_message("user", "hello")};
    auto body = client::build_request(messages, settings, ep.model_id);
    auto res = client::send_request(ep, body, 5.0);
    CHECK(res.text == "hello");
    CHECK(res.finish_reason == "stop");
    CHECK(res.latency_s >= 0.0);
    CHECK(res.usage_tokens.has_value());
  }

  SECTION("500 maps to a retryable HttpStatusError") {
    mock::MockBehavior failing;
    failing.fail_first_n = 1000;
    mock::MockServer bad(failing);
    auto bad_ep = endpoint_for(bad.base_url());
    std::vector<ChatMessage> messages = {ChatMessage::text_message("user", "x")};
    auto body = client::build_request(messages, settings, "m");
    try {
      client::send_request(bad_ep, body, 5.0);
      FAIL("expected HttpStatusError");
    } catch (const HttpStatusError& e) {
      CHECK(e.status() == 500);
      CHECK(e.retryable());
    }
  }

  SECTION("latency above the timeout raises TimeoutError") {
    mock::MockBehavior slow;
    slow.latency_min_s = slow.latency_max_s = 1.0;
    mock::MockServer sleepy(slow);
    auto slow_ep = endpoint_for(sleepy.base_url());
    std::vector<ChatMessage> messages = {ChatMessage::text_message("user", "x")};
    auto body = client::build_request(messages, settings, "m");
    CHECK_THROWS_AS(client::send_request(slow_ep, body, 0.3), TimeoutError);
  }
}

TEST_CASE("connection failures raise ConnectionError") {
  auto ep = endpoint_for("http://127.0.0.1:1");  // nothing listens on port 1
  config::EffectiveSettings settings;
  std::vector<ChatMessage> messages = {ChatMessage::text_message("user", "x")};
  auto body = client::build_request(messages, settings, "m");
  CHECK_THROWS_AS(client::send_request(ep, body, 2.0), ConnectionError);
}

TEST_CASE("bearer token comes from the configured environment variable") {
  mock::MockBehavior behavior;
  mock::MockServer server(behavior);
  auto ep = endpoint_for(server.base_url());
  ep.api_key_env = "AUDIOEVAL_TEST_KEY";
  ::setenv("AUDIOEVAL_TEST_KEY", "sk-123", 1);
  config::EffectiveSettings settings;
  std::vector<ChatMessage> messages = {ChatMessage::text_message("user", "auth ok")};
  auto body = client::build_request(messages, settings, "m");
  // The mock ignores auth; this checks the header private path doesn't break
  // the request and unset/set env are both legal.
  CHECK(client::send_request(ep, body, 5.0).text == "auth ok");
  ::unsetenv("AUDIOEVAL_TEST_KEY");
  CHECK(client::send_request(ep, body, 5.0).text == "auth ok");
}
