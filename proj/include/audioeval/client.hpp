#pragma once

#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "audioeval/audio.hpp"
#include "audioeval/config.hpp"
#include "audioeval/errors.hpp"
#include "audioeval/util.hpp"

namespace audioeval::client {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Message model (mirror of the chat-completions wire shapes)
// ---------------------------------------------------------------------------

enum class PartKind { kText, kInputAudio };

struct ContentPart {
  PartKind kind = PartKind::kText;
  std::string text;       // kind == kText
  std::string audio_b64;  // kind == kInputAudio, always format "wav"

  static ContentPart make_text(std::string t) {
    return {PartKind::kText, std::move(t), {}};
  }
  static ContentPart make_audio(std::string b64) {
    return {PartKind::kInputAudio, {}, std::move(b64)};
  }
};

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::vector<ContentPart> parts;

  static ChatMessage text_message(std::string role, std::string text) {
    ChatMessage m;
    m.role = std::move(role);
    m.parts.push_back(ContentPart::make_text(std::move(text)));
    return m;
  }
};

struct ChatResponse {
  std::string text;
  std::string finish_reason;
  double latency_s = 0.0;
  std::optional<long long> usage_tokens;
};

// ---------------------------------------------------------------------------
// Audio encoding
// ---------------------------------------------------------------------------

// Encodes one WAV file as input_audio part(s). With chunk_s set and audio
// longer than it, the PCM payload splits on sample boundaries into
// ceil(duration/chunk_s) standalone WAV parts whose payloads concatenate
// back to the original.
inline std::vector<ContentPart> encode_audio_part(const std::string& path,
                                                  std::optional<double> chunk_s) {
  audio::WavData wav = audio::read_wav_file(path);
  audio::require_harness_format(wav, path);

  std::vector<ContentPart> parts;
  if (!chunk_s || wav.duration_s() <= *chunk_s) {
    parts.push_back(ContentPart::make_audio(util::base64_encode(audio::serialize_wav(wav))));
    return parts;
  }
  for (auto& piece : audio::chunk_pcm(wav.pcm, *chunk_s)) {
    audio::WavData chunk;
    chunk.channels = wav.channels;
    chunk.sample_rate = wav.sample_rate;
    chunk.bits_per_sample = wav.bits_per_sample;
    chunk.pcm = std::move(piece);
    parts.push_back(ContentPart::make_audio(util::base64_encode(audio::serialize_wav(chunk))));
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Prompt templates: "{name}" placeholders, names resolve from the sample
// field vocabulary (text, sample_id, metadata keys).
// ---------------------------------------------------------------------------

inline std::string render_template(std::string_view tmpl,
                                   const std::map<std::string, std::string>& vocab) {
  std::string out;
  out.reserve(tmpl.size());
  size_t i = 0;
  auto is_name_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  };
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i++]);
      continue;
    }
    size_t j = i + 1;
    while (j < tmpl.size() && is_name_char(tmpl[j])) ++j;
    if (j < tmpl.size() && tmpl[j] == '}' && j > i + 1) {
      std::string name(tmpl.substr(i + 1, j - i - 1));
      auto it = vocab.find(name);
      if (it == vocab.end())
        throw TemplateError("unresolved placeholder {" + name + "}");
      out += it->second;
      i = j + 1;
    } else {
      out.push_back(tmpl[i++]);  // stray brace passes through
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Request building
// ---------------------------------------------------------------------------

namespace detail {

inline json message_to_json(const ChatMessage& m) {
  if (m.parts.empty()) throw Error("chat message with no content parts");
  json msg;
  msg["role"] = m.role;
  if (m.role == "user") {
    json content = json::array();
    for (const auto& p : m.parts) {
      if (p.kind == PartKind::kText) {
        content.push_back({{"type", "text"}, {"text", p.text}});
      } else {
        content.push_back(
            {{"type", "input_audio"},
             {"input_audio", {{"data", p.audio_b64}, {"format", "wav"}}}});
      }
    }
    msg["content"] = content;
  } else {
    // assistant/system messages carry plain text content
    std::string text;
    for (const auto& p : m.parts) text += p.text;
    msg["content"] = text;
  }
  return msg;
}

}  // namespace detail

// Emits the chat-completions request body. nlohmann objects keep sorted key
// order, so identical inputs serialize to identical bytes.
inline json build_request(const std::vector<ChatMessage>& messages,
                          const config::EffectiveSettings& settings,
                          const std::string& model_id) {
  json body;
  body["model"] = model_id;
  body["messages"] = json::array();
  for (const auto& m : messages) body["messages"].push_back(detail::message_to_json(m));
  body["temperature"] = settings.temperature;
  body["max_tokens"] = settings.max_tokens;
  return body;
}

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

// Pure status classification: 5xx and 429 retry, other 4xx do not.
inline bool is_retryable_status(int code) {
  if (code >= 500) return true;
  return code == 429;
}

namespace detail {

inline std::string response_text_from_content(const json& content) {
  if (content.is_string()) return content.get<std::string>();
  if (content.is_array()) {
    std::string out;
    for (const auto& part : content)
      if (part.is_object() && part.value("type", "") == "text")
        out += part.value("text", "");
    return out;
  }
  throw DecodeError("choices[0].message.content has unsupported type");
}

}  // namespace detail

inline ChatResponse parse_chat_response(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw DecodeError(std::string("response is not JSON: ") + e.what());
  }
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
    throw DecodeError("response missing choices[0]");
  const json& choice = j["choices"][0];  // only the first choice is consumed
  if (!choice.contains("message") || !choice["message"].contains("content"))
    throw DecodeError("response missing choices[0].message.content");
  ChatResponse r;
  r.text = detail::response_text_from_content(choice["message"]["content"]);
  r.finish_reason = choice.value("finish_reason", "");
  if (j.contains("usage") && j["usage"].is_object() &&
      j["usage"].contains("total_tokens") &&
      j["usage"]["total_tokens"].is_number_integer())
    r.usage_tokens = j["usage"]["total_tokens"].get<long long>();
  return r;
}

// POST {base_url}/chat/completions with bearer auth from api_key_env.
// Throws TimeoutError / ConnectionError / HttpStatusError / DecodeError.
inline ChatResponse send_request(const config::EndpointSpec& endpoint,
                                 const json& request, double timeout_s) {
  auto url = util::split_url(endpoint.base_url);
  httplib::Client cli(url.origin);
  auto budget = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::duration<double>(timeout_s));
  cli.set_connection_timeout(budget);
  cli.set_read_timeout(budget);
  cli.set_write_timeout(budget);

  httplib::Headers headers;
  if (!endpoint.api_key_env.empty()) {
    if (const char* key = std::getenv(endpoint.api_key_env.c_str());
        key && *key)
      headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  auto t0 = std::chrono::steady_clock::now();
  auto res = cli.Post(url.path_prefix + "/chat/completions", headers,
                      request.dump(), "application/json");
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();

  if (!res) {
    auto err = res.error();
    bool timed_out =
        err == httplib::Error::ConnectionTimeout ||
        ((err == httplib::Error::Read || err == httplib::Error::Write) &&
         elapsed >= timeout_s * 0.9);
    if (timed_out)
      throw TimeoutError("request to " + endpoint.base_url + " timed out after " +
                         std::to_string(elapsed) + " s");
    throw ConnectionError("request to " + endpoint.base_url +
                          " failed: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    std::string snippet = res->body.substr(0, 200);
    throw HttpStatusError(res->status, is_retryable_status(res->status), snippet);
  }
  ChatResponse out = parse_chat_response(res->body);
  out.latency_s = elapsed;
  return out;
}

}  // namespace audioeval::client
