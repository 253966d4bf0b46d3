#include <catch2/catch_amalgamated.hpp>

#include "audioeval/judge.hpp"
#include "audioeval/mock_server.hpp"
#include "test_support.hpp"

using namespace audioeval;

namespace {

config::JudgeSpec judge_spec(const std::string& url, config::JudgeMode mode,
                             int concurrency = 2) {
  config::JudgeSpec j;
  j.endpoint.name = "judge";
  j.endpoint.base_url = url;
  j.endpoint.model_id = "judge-model";
  j.endpoint.api_key_env = "";
  j.endpoint.capacity = 8;
  j.endpoint.retry_limit = 0;
  j.endpoint.timeout_s = 10.0;
  j.judge_mode = mode;
  j.judge_concurrency = concurrency;
  return j;
}

}  // namespace

TEST_CASE("binary judge verdict maps to 0/100") {
  // The echo mock returns the rendered prompt; script a bare verdict instead.
  mock::MockBehavior behavior;
  behavior.response_script = {};
  mock::MockServer server(behavior);
  // With no script the mock echoes the whole prompt, which fails parsing.
  scheduler::PermitPool pool(2);
  auto spec = judge_spec(server.base_url(), config::JudgeMode::kBinary);
  CHECK_THROWS_AS(judge::llm_judge_score("q", "ref", "hyp", spec, pool),
                  JudgeParseError);
}

TEST_CASE("scripted judge verdicts") {
  // Key the script on the question text, which the prompt embeds.
  mock::MockBehavior behavior;
  behavior.response_script["yes-case"] = "The answer matches.\n1";
  behavior.response_script["no-case"] = "No.\n0";
  behavior.response_script["rate-case"] = "Solid.\nRating: 4";
  mock::MockServer server(behavior);
  scheduler::PermitPool pool(2);

  auto binary = judge_spec(server.base_url(), config::JudgeMode::kBinary);
  CHECK(judge::llm_judge_score("[sid:yes-case] q", "r", "h", binary, pool) == 100.0);
  CHECK(judge::llm_judge_score("[sid:no-case] q", "r", "h", binary, pool) == 0.0);

  auto detailed = judge_spec(server.base_url(), config::JudgeMode::kDetailed);
  CHECK(judge::llm_judge_score("[sid:rate-case] q", "r", "h", detailed, pool) == 80.0);
}

TEST_CASE("judge transport failures surface with attempts") {
  mock::MockBehavior behavior;
  behavior.fail_first_n = 1000;
  mock::MockServer server(behavior);
  scheduler::PermitPool pool(1);
  auto spec = judge_spec(server.base_url(), config::JudgeMode::kBinary);
  spec.endpoint.retry_limit = 1;
  try {
    judge::llm_judge_score("q", "r", "h", spec, pool);
    FAIL("expected transport failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("2 attempt(s)") != std::string::npos);
  }
}

TEST_CASE("judge templates render all three placeholders") {
  for (auto mode : {config::JudgeMode::kBinary, config::JudgeMode::kDetailed}) {
    auto text = client::render_template(
        judge::template_text(mode),
        {{"question", "Q?"}, {"reference", "REF"}, {"hypothesis", "HYP"}});
    CHECK(text.find("Q?") != std::string::npos);
    CHECK(text.find("REF") != std::string::npos);
    CHECK(text.find("HYP") != std::string::npos);
    CHECK(text.find("{") == std::string::npos);
  }
}

TEST_CASE("shipped fixture files match the embedded templates") {
  auto root = std::filesystem::path(AUDIOEVAL_SOURCE_DIR);
  CHECK(testsupport::read_text(root / "fixtures" / "judge" / "binary_v1.txt") ==
        judge::binary_template());
  CHECK(testsupport::read_text(root / "fixtures" / "judge" / "detailed_v1.txt") ==
        judge::detailed_template());
}

TEST_CASE("template versions") {
  CHECK(std::string(judge::template_version(config::JudgeMode::kBinary)) ==
        "binary_v1");
  CHECK(std::string(judge::template_version(config::JudgeMode::kDetailed)) ==
        "detailed_v1");
}
