#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "audioeval/dataset.hpp"
#include "test_support.hpp"

using namespace audioeval;
using testsupport::TempDir;

namespace {

std::vector<dataset::SampleRecord> make_samples(int n) {
  std::vector<dataset::SampleRecord> out;
  for (int i = 0; i < n; ++i) {
    dataset::SampleRecord s;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%03d", i);
    s.sample_id = buf;
    s.audio_duration_s = i;
    s.turns.push_back({dataset::TurnRole::kUser, std::string("q"), std::nullopt});
    s.reference = {dataset::ReferenceKind::kPlainText, "r"};
    out.push_back(std::move(s));
  }
  return out;
}

config::EndpointSpec endpoint(const std::string& name, int capacity) {
  config::EndpointSpec e;
  e.name = name;
  e.capacity = capacity;
  return e;
}

}  // namespace

TEST_CASE("load_manifest keeps file order") {
  TempDir dir("manifest");
  std::string lines = testsupport::manifest_line("a", "one", "1") + "\n" +
                      testsupport::manifest_line("b", "two", "2") + "\n" +
                      testsupport::manifest_line("c", "three", "3") + "\n";
  testsupport::write_text(dir.file("m.jsonl"), lines);

  auto samples = dataset::load_manifest(dir.file("m.jsonl").string());
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].sample_id == "a");
  CHECK(samples[1].sample_id == "b");
  CHECK(samples[2].sample_id == "c");
  CHECK(samples[0].turns.size() == 1);
  CHECK(samples[0].reference.value == "1");
}

TEST_CASE("manifest errors carry line numbers") {
  TempDir dir("manifest");
  nlohmann::json no_ref = {
      {"sample_id", "b"},
      {"turns", nlohmann::json::array({{{"role", "user"}, {"text", "x"}}})}};
  std::string lines = testsupport::manifest_line("a", "one", "1") + "\n" +
                      no_ref.dump() + "\n";
  testsupport::write_text(dir.file("m.jsonl"), lines);
  try {
    dataset::load_manifest(dir.file("m.jsonl").string());
    FAIL("expected ManifestError");
  } catch (const ManifestError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()) == "line 2: missing field reference");
  }

  testsupport::write_text(dir.file("bad.jsonl"), "{not json\n");
  CHECK_THROWS_AS(dataset::load_manifest(dir.file("bad.jsonl").string()),
                  ManifestError);

  CHECK_THROWS_AS(dataset::load_manifest("/no/such/manifest.jsonl"), IoError);
}

TEST_CASE("duplicate sample ids rejected") {
  TempDir dir("manifest");
  std::string lines = testsupport::manifest_line("x", "one", "1") + "\n" +
                      testsupport::manifest_line("x", "two", "2") + "\n";
  testsupport::write_text(dir.file("m.jsonl"), lines);
  CHECK_THROWS_AS(dataset::load_manifest(dir.file("m.jsonl").string()),
                  DuplicateIdError);
}

TEST_CASE("manifest validates structure") {
  TempDir dir("manifest");
  auto expect_manifest_error = [&](const nlohmann::json& j) {
    testsupport::write_text(dir.file("m.jsonl"), j.dump() + "\n");
    CHECK_THROWS_AS(dataset::load_manifest(dir.file("m.jsonl").string()),
                    ManifestError);
  };
  // no turns
  expect_manifest_error({{"sample_id", "a"},
                         {"turns", nlohmann::json::array()},
                         {"reference", {{"kind", "plain_text"}, {"value", "v"}}}});
  // bad role
  expect_manifest_error(
      {{"sample_id", "a"},
       {"turns", nlohmann::json::array({{{"role", "robot"}, {"text", "x"}}})},
       {"reference", {{"kind", "plain_text"}, {"value", "v"}}}});
  // audio_index out of range
  expect_manifest_error(
      {{"sample_id", "a"},
       {"turns",
        nlohmann::json::array({{{"role", "user"}, {"text", "x"}, {"audio_index", 0}}})},
       {"reference", {{"kind", "plain_text"}, {"value", "v"}}}});
  // unknown field
  expect_manifest_error(
      {{"sample_id", "a"},
       {"surprise", 1},
       {"turns", nlohmann::json::array({{{"role", "user"}, {"text", "x"}}})},
       {"reference", {{"kind", "plain_text"}, {"value", "v"}}}});
  // missing audio file
  expect_manifest_error(
      {{"sample_id", "a"},
       {"audio", nlohmann::json::array({{{"path", "ghost.wav"}, {"duration_s", 1.0}}})},
       {"turns", nlohmann::json::array({{{"role", "user"}, {"text", "x"}}})},
       {"reference", {{"kind", "plain_text"}, {"value", "v"}}}});
}

TEST_CASE("manifest audio paths resolve against the manifest directory") {
  TempDir dir("manifest");
  testsupport::make_wav_file(dir.path(), "clip.wav", 2.0);
  testsupport::write_text(
      dir.file("m.jsonl"),
      testsupport::manifest_line_audio("a", "listen", "clip.wav", 2.0, "ref") + "\n");
  auto samples = dataset::load_manifest(dir.file("m.jsonl").string());
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].audio_duration_s == 2.0);
  CHECK(samples[0].audio[0].path == dir.file("clip.wav").string());
}

TEST_CASE("apply_filters duration window") {
  auto samples = make_samples(3);
  samples[0].audio_duration_s = 2;
  samples[1].audio_duration_s = 8;
  samples[2].audio_duration_s = 15;
  config::FilterSpec f;
  f.min_audio_s = 5;
  f.max_audio_s = 10;
  auto out = dataset::apply_filters(samples, f, 0);
  REQUIRE(out.size() == 1);
  CHECK(out[0].audio_duration_s == 8);
}

TEST_CASE("empty filter is identity") {
  auto samples = make_samples(10);
  auto out = dataset::apply_filters(samples, {}, 123);
  CHECK(out == samples);
}

TEST_CASE("metadata filter") {
  auto samples = make_samples(4);
  samples[1].metadata["lang"] = "en";
  samples[3].metadata["lang"] = "en";
  samples[3].metadata["noise"] = "clean";
  config::FilterSpec f;
  f.metadata_equals = {{"lang", "en"}};
  auto out = dataset::apply_filters(samples, f, 0);
  REQUIRE(out.size() == 2);
  CHECK(out[0].sample_id == "s001");
  CHECK(out[1].sample_id == "s003");

  f.metadata_equals = {{"lang", "en"}, {"noise", "clean"}};
  out = dataset::apply_filters(samples, f, 0);
  REQUIRE(out.size() == 1);
  CHECK(out[0].sample_id == "s003");
}

TEST_CASE("max_samples selection is seeded and stable") {
  auto samples = make_samples(100);
  config::FilterSpec f;
  f.max_samples = 10;

  auto once = dataset::apply_filters(samples, f, 42);
  auto twice = dataset::apply_filters(samples, f, 42);
  REQUIRE(once.size() == 10);
  CHECK(once == twice);

  auto other_seed = dataset::apply_filters(samples, f, 43);
  CHECK(once != other_seed);  // different subset with overwhelming probability

  // survivors stay in manifest order
  for (size_t i = 1; i < once.size(); ++i)
    CHECK(once[i - 1].sample_id < once[i].sample_id);
}

TEST_CASE("apply_filters is idempotent") {
  util::SplitMix64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto samples = make_samples(40);
    for (auto& s : samples) s.audio_duration_s = rng.uniform() * 20;
    config::FilterSpec f;
    if (rng.uniform() < 0.5) f.min_audio_s = 3;
    if (rng.uniform() < 0.5) f.max_audio_s = 15;
    if (rng.uniform() < 0.7) f.max_samples = 1 + static_cast<int>(rng.bounded(20));
    long long seed = static_cast<long long>(rng.next());
    auto once = dataset::apply_filters(samples, f, seed);
    auto again = dataset::apply_filters(once, f, seed);
    CHECK(again == once);
  }
}

TEST_CASE("sharding examples") {
  auto sizes = dataset::apportion_largest_remainder(100, {8, 2});
  CHECK(sizes == std::vector<size_t>{80, 20});

  sizes = dataset::apportion_largest_remainder(10, {3, 3, 4});
  CHECK(sizes == std::vector<size_t>{3, 3, 4});

  auto samples = make_samples(7);
  auto shards = dataset::shard_dataset(samples, {endpoint("only", 3)});
  REQUIRE(shards.size() == 1);
  CHECK(shards[0].samples.size() == 7);
  CHECK(shards[0].endpoint_name == "only");
}

TEST_CASE("shards are contiguous, disjoint and covering") {
  auto samples = make_samples(23);
  auto shards = dataset::shard_dataset(
      samples, {endpoint("a", 5), endpoint("b", 1), endpoint("c", 3)});
  REQUIRE(shards.size() == 3);

  std::vector<std::string> reassembled;
  std::set<std::string> seen;
  for (const auto& shard : shards)
    for (const auto& s : shard.samples) {
      CHECK(seen.insert(s.sample_id).second);
      reassembled.push_back(s.sample_id);
    }
  CHECK(reassembled.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i)
    CHECK(reassembled[i] == samples[i].sample_id);  // contiguous slices in order
}

TEST_CASE("largest remainder stays within one of the exact quota") {
  util::SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = rng.bounded(2000);
    size_t k = 1 + rng.bounded(10);
    std::vector<int> caps;
    long long total = 0;
    for (size_t i = 0; i < k; ++i) {
      caps.push_back(1 + static_cast<int>(rng.bounded(32)));
      total += caps.back();
    }
    auto sizes = dataset::apportion_largest_remainder(n, caps);
    size_t sum = 0;
    for (size_t i = 0; i < k; ++i) {
      double quota = static_cast<double>(n) * caps[i] / static_cast<double>(total);
      CHECK(std::abs(static_cast<double>(sizes[i]) - quota) < 1.0);
      sum += sizes[i];
    }
    CHECK(sum == n);
  }
}
