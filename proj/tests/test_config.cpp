#include <catch2/catch_amalgamated.hpp>

#include "audioeval/config.hpp"
#include "test_support.hpp"

using namespace audioeval;
using config::RunConfig;

namespace {

const char* kMinimalYaml = R"(
endpoints:
  - name: m1
    base_url: http://127.0.0.1:9999
    model_id: test-model
    api_key_env: TEST_KEY
    capacity: 4
    retry_limit: 1
    timeout_s: 30
tasks:
  - task_name: asr
    category: speech_recognition
    dataset_path: data/asr.jsonl
    metric_names: [wer]
    prompt_template: "{text}"
    multi_turn: false
)";

std::string minimal_with(const std::string& patch_key, const std::string& patch) {
  std::string doc = kMinimalYaml;
  doc += patch_key.empty() ? patch : (patch_key + ": " + patch + "\n");
  return doc;
}

}  // namespace

TEST_CASE("parse minimal document") {
  auto cfg = config::parse_config(kMinimalYaml);
  REQUIRE(cfg.endpoints.size() == 1);
  REQUIRE(cfg.tasks.size() == 1);
  CHECK(cfg.endpoints[0].name == "m1");
  CHECK(cfg.endpoints[0].capacity == 4);
  CHECK(cfg.endpoints[0].retry_limit == 1);
  CHECK(cfg.endpoints[0].timeout_s == 30.0);
  CHECK(!cfg.endpoints[0].temperature.has_value());
  CHECK(cfg.tasks[0].task_name == "asr");
  CHECK(cfg.tasks[0].category == config::Category::kSpeechRecognition);
  CHECK(cfg.tasks[0].metric_names == std::vector<std::string>{"wer"});
  CHECK_FALSE(cfg.tasks[0].multi_turn);
  // defaults
  CHECK(cfg.global_permit_limit == 8);
  CHECK(cfg.stagger_ms == 0);
  CHECK(cfg.seed == 0);
  REQUIRE(cfg.aggregations.size() == 1);
  CHECK(cfg.aggregations[0].dimensions.size() == 3);
}

TEST_CASE("json is accepted too") {
  auto cfg = config::parse_config(config::serialize_config(
      config::parse_config(kMinimalYaml)));
  CHECK(cfg.endpoints[0].name == "m1");
}

TEST_CASE("capacity zero violates the invariant with a named path") {
  std::string doc = kMinimalYaml;
  auto pos = doc.find("capacity: 4");
  doc.replace(pos, 11, "capacity: 0");
  try {
    config::parse_config(doc);
    FAIL("expected ConfigInvariantError");
  } catch (const ConfigInvariantError& e) {
    CHECK(e.path() == "endpoints[0].capacity");
  }
}

TEST_CASE("duplicate endpoint names are a schema error") {
  std::string doc = kMinimalYaml;
  doc += R"(
filters: {}
)";
  auto pos = doc.find("tasks:");
  std::string dup = R"(  - name: m1
    base_url: http://127.0.0.1:9998
    model_id: other
    api_key_env: K
    capacity: 2
    retry_limit: 0
    timeout_s: 10
)";
  doc.insert(pos, dup);
  try {
    config::parse_config(doc);
    FAIL("expected ConfigSchemaError");
  } catch (const ConfigSchemaError& e) {
    CHECK(e.path() == "endpoints[1].name");
  }
}

TEST_CASE("unknown keys are rejected everywhere") {
  CHECK_THROWS_AS(config::parse_config(minimal_with("bogus_top_level", "1")),
                  ConfigSchemaError);
  std::string doc = kMinimalYaml;
  doc.replace(doc.find("capacity:"), 9, "capcity:");  // typo'd key
  try {
    config::parse_config(doc);
    FAIL("expected ConfigSchemaError");
  } catch (const ConfigSchemaError& e) {
    CHECK(std::string(e.what()).find("capcity") != std::string::npos);
    // ... and capacity is now also missing
  }
}

TEST_CASE("missing and ill-typed fields name their path") {
  std::string doc = kMinimalYaml;
  doc.replace(doc.find("    model_id: test-model\n"), 25, "");
  try {
    config::parse_config(doc);
    FAIL("expected ConfigSchemaError");
  } catch (const ConfigSchemaError& e) {
    CHECK(e.path() == "endpoints[0].model_id");
  }

  doc = kMinimalYaml;
  doc.replace(doc.find("timeout_s: 30"), 13, "timeout_s: always");
  try {
    config::parse_config(doc);
    FAIL("expected ConfigSchemaError");
  } catch (const ConfigSchemaError& e) {
    CHECK(e.path() == "endpoints[0].timeout_s");
  }
}

TEST_CASE("syntax errors are distinguished from schema errors") {
  CHECK_THROWS_AS(config::parse_config("endpoints: [unclosed"), ConfigSyntaxError);
  CHECK_THROWS_AS(config::parse_config("- just\n- a\n- list\n"), ConfigSchemaError);
}

TEST_CASE("metric names must be registered") {
  std::string doc = kMinimalYaml;
  doc.replace(doc.find("[wer]"), 5, "[wer, made_up_metric]");
  try {
    config::parse_config(doc);
    FAIL("expected ConfigSchemaError");
  } catch (const ConfigSchemaError& e) {
    CHECK(e.path() == "tasks[0].metric_names[1]");
  }
}

TEST_CASE("unknown category lists the valid ones") {
  std::string doc = kMinimalYaml;
  doc.replace(doc.find("speech_recognition"), 18, "telepathy");
  try {
    config::parse_config(doc);
    FAIL("expected ConfigSchemaError");
  } catch (const ConfigSchemaError& e) {
    CHECK(std::string(e.what()).find("paralinguistics") != std::string::npos);
  }
}

TEST_CASE("judge-backed metrics require a matching judge block") {
  std::string doc = kMinimalYaml;
  doc.replace(doc.find("[wer]"), 5, "[llm_judge_binary]");
  CHECK_THROWS_AS(config::parse_config(doc), ConfigInvariantError);

  doc += R"(
filters: {}
)";
  // wrong mode
  std::string judge = R"(    judge:
      endpoint:
        name: judge-ep
        base_url: http://127.0.0.1:9990
        model_id: judge-model
        api_key_env: JK
        capacity: 2
        retry_limit: 0
        timeout_s: 10
      judge_mode: detailed
      judge_concurrency: 2
)";
  doc.insert(doc.find("filters:"), judge);
  try {
    config::parse_config(doc);
    FAIL("expected ConfigInvariantError");
  } catch (const ConfigInvariantError& e) {
    CHECK(e.path() == "tasks[0].judge.judge_mode");
  }
}

TEST_CASE("filters must reference known tasks and keep bounds ordered") {
  CHECK_THROWS_AS(
      config::parse_config(minimal_with("", "filters:\n  nope: {max_samples: 3}\n")),
      ConfigInvariantError);
  CHECK_THROWS_AS(
      config::parse_config(minimal_with(
          "", "filters:\n  asr: {min_audio_s: 9, max_audio_s: 2}\n")),
      ConfigInvariantError);
  auto ok = config::parse_config(minimal_with(
      "", "filters:\n  asr: {min_audio_s: 2, max_audio_s: 9, max_samples: 5}\n"));
  CHECK(ok.filters.at("asr").max_samples == 5);
}

TEST_CASE("aggregation dimensions validated") {
  CHECK_THROWS_AS(
      config::parse_config(minimal_with(
          "", "aggregations:\n  - dimensions: []\n    reducer: mean\n")),
      ConfigInvariantError);
  CHECK_THROWS_AS(
      config::parse_config(minimal_with(
          "", "aggregations:\n  - dimensions: [task, task]\n    reducer: mean\n")),
      ConfigInvariantError);
  CHECK_THROWS_AS(
      config::parse_config(minimal_with(
          "", "aggregations:\n  - dimensions: [banana]\n    reducer: mean\n")),
      ConfigSchemaError);
  CHECK_THROWS_AS(
      config::parse_config(minimal_with(
          "", "aggregations:\n  - dimensions: [task]\n    reducer: median\n")),
      ConfigSchemaError);
}

TEST_CASE("resolve_effective_settings precedence") {
  config::TaskSpec task;
  config::EndpointSpec ep;
  ep.timeout_s = 12;
  ep.retry_limit = 3;

  SECTION("task only") {
    task.temperature = 0.7;
    auto s = config::resolve_effective_settings(task, ep);
    CHECK(s.temperature == 0.7);
    CHECK(s.max_tokens == 1024);
  }
  SECTION("endpoint overrides task, including zero") {
    task.temperature = 0.7;
    ep.temperature = 0.0;
    auto s = config::resolve_effective_settings(task, ep);
    CHECK(s.temperature == 0.0);
  }
  SECTION("built-in defaults when both absent") {
    auto s = config::resolve_effective_settings(task, ep);
    CHECK(s.temperature == 0.0);
    CHECK(s.max_tokens == 1024);
  }
  SECTION("endpoint-only fields pass through") {
    ep.audio_chunk_s = 30.0;
    auto s = config::resolve_effective_settings(task, ep);
    CHECK(s.timeout_s == 12.0);
    CHECK(s.retry_limit == 3);
    CHECK(s.audio_chunk_s == 30.0);
  }
}

TEST_CASE("serialize/parse round trip is identity") {
  // minimal
  auto c1 = config::parse_config(kMinimalYaml);
  CHECK(config::parse_config(config::serialize_config(c1)) == c1);

  // fully featured
  std::string doc = kMinimalYaml;
  doc.replace(doc.find("[wer]"), 5, "[llm_judge_detailed, match_fold]");
  doc.insert(doc.find("tasks:"), "");
  doc += R"(
filters:
  asr:
    min_audio_s: 0.5
    max_audio_s: 60
    max_samples: 10
    metadata_equals: {lang: en}
aggregations:
  - dimensions: [task, model, metric]
    reducer: mean
  - dimensions: [category, metric]
    reducer: weighted_mean_by_sample_count
global_permit_limit: 16
stagger_ms: 25
output_dir: out/run1
seed: 1234
)";
  std::string judge = R"(    judge:
      endpoint:
        name: judge-ep
        base_url: http://127.0.0.1:9990
        model_id: judge-model
        api_key_env: JK
        capacity: 2
        retry_limit: 1
        timeout_s: 20
        temperature: 0.5
        max_tokens: 64
      judge_mode: detailed
      judge_concurrency: 3
)";
  doc.insert(doc.find("\nfilters:"), "\n" + judge);
  auto c2 = config::parse_config(doc);
  CHECK(c2.tasks[0].judge.has_value());
  auto round = config::parse_config(config::serialize_config(c2));
  CHECK(round == c2);
  CHECK(config::serialize_config(round) == config::serialize_config(c2));
}

TEST_CASE("fingerprint tracks config changes") {
  auto c1 = config::parse_config(kMinimalYaml);
  auto c2 = c1;
  CHECK(config::config_fingerprint(c1) == config::config_fingerprint(c2));
  c2.seed = 999;
  CHECK(config::config_fingerprint(c1) != config::config_fingerprint(c2));
  c2 = c1;
  c2.endpoints[0].capacity = 5;
  CHECK(config::config_fingerprint(c1) != config::config_fingerprint(c2));
}

TEST_CASE("every config error names a concrete path") {
  const std::vector<std::string> broken = {
      minimal_with("global_permit_limit", "0"),
      minimal_with("stagger_ms", "-5"),
      minimal_with("seed", "\"abc\""),
      minimal_with("", "filters: 3\n"),
  };
  for (const auto& doc : broken) {
    try {
      config::parse_config(doc);
      FAIL("expected an error for: " + doc);
    } catch (const ConfigSchemaError& e) {
      CHECK(!e.path().empty());
    } catch (const ConfigInvariantError& e) {
      CHECK(!e.path().empty());
    }
  }
}

TEST_CASE("category parsing is case-insensitive") {
  CHECK(config::parse_category("Paralinguistics") ==
        config::Category::kParalinguistics);
  CHECK(config::parse_category("SPEECH_RECOGNITION") ==
        config::Category::kSpeechRecognition);
  CHECK(!config::parse_category("nope").has_value());
}

TEST_CASE("load_config_file io error") {
  CHECK_THROWS_AS(config::load_config_file("/definitely/not/here.yaml"), IoError);
  testsupport::TempDir dir("cfg");
  testsupport::write_text(dir.file("c.yaml"), kMinimalYaml);
  CHECK(config::load_config_file(dir.file("c.yaml").string()).endpoints.size() == 1);
}
