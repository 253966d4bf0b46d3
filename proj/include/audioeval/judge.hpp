#pragma once

#include <map>
#include <string>

#include "audioeval/client.hpp"
#include "audioeval/config.hpp"
#include "audioeval/errors.hpp"
#include "audioeval/metrics.hpp"
#include "audioeval/scheduler.hpp"

namespace audioeval::judge {

// Prompt templates are versioned fixtures; the same text ships under
// fixtures/judge/ and run reports record which version produced the scores.

inline constexpr const char* kBinaryTemplateVersion = "binary_v1";
inline constexpr const char* kDetailedTemplateVersion = "detailed_v1";

inline const std::string& binary_template() {
  static const std::string kText =
      R"(You are an impartial grader. Compare the model answer with the reference answer.

Question:
{question}

Reference answer:
{reference}

Model answer:
{hypothesis}

Decide whether the model answer is correct with respect to the reference.
Reply with a single digit on the final line: 1 if correct, 0 if incorrect.
)";
  return kText;
}

inline const std::string& detailed_template() {
  static const std::string kText =
      R"(You are an impartial grader. Rate the model answer against the reference answer.

Question:
{question}

Reference answer:
{reference}

Model answer:
{hypothesis}

Rate the model answer for correctness and completeness on an integer scale
from 0 (entirely wrong) to 5 (fully correct and complete).
End your reply with a final line of exactly: Rating: <0-5>
)";
  return kText;
}

inline const std::string& template_text(config::JudgeMode mode) {
  return mode == config::JudgeMode::kBinary ? binary_template() : detailed_template();
}

inline const char* template_version(config::JudgeMode mode) {
  return mode == config::JudgeMode::kBinary ? kBinaryTemplateVersion
                                            : kDetailedTemplateVersion;
}

// Renders the fixed prompt, sends it through the standard client under the
// judge permit pool, and parses the verdict into a 0..100 score. Transport
// exhaustion and unparseable verdicts both throw (recorded per sample by the
// scorer).
inline double llm_judge_score(const std::string& question,
                              const std::string& reference,
                              const std::string& hypothesis,
                              const config::JudgeSpec& judge,
                              scheduler::PermitPool& judge_pool) {
  std::map<std::string, std::string> vocab = {
      {"question", question}, {"reference", reference}, {"hypothesis", hypothesis}};
  std::string prompt = client::render_template(template_text(judge.judge_mode), vocab);

  config::EffectiveSettings settings;
  settings.temperature = judge.endpoint.temperature.value_or(config::kDefaultTemperature);
  settings.max_tokens = judge.endpoint.max_tokens.value_or(config::kDefaultMaxTokens);
  settings.timeout_s = judge.endpoint.timeout_s;
  settings.retry_limit = judge.endpoint.retry_limit;

  const config::EndpointSpec endpoint = judge.endpoint;
  auto action = [endpoint, settings, prompt]() {
    std::vector<client::ChatMessage> messages = {
        client::ChatMessage::text_message("user", prompt)};
    auto body = client::build_request(messages, settings, endpoint.model_id);
    return client::send_request(endpoint, body, settings.timeout_s);
  };

  auto outcome = scheduler::execute_with_retry(
      action, {settings.retry_limit, settings.timeout_s}, judge_pool);
  if (!outcome.ok())
    throw Error("judge request failed after " + std::to_string(outcome.attempts) +
                " attempt(s): " + outcome.failure->describe());

  return judge.judge_mode == config::JudgeMode::kBinary
             ? metrics::parse_binary_verdict(outcome.response->text)
             : metrics::parse_detailed_verdict(outcome.response->text);
}

}  // namespace audioeval::judge
