#include <catch2/catch_amalgamated.hpp>

#include "audioeval/audio.hpp"
#include "audioeval/client.hpp"
#include "audioeval/util.hpp"
#include "test_support.hpp"

using namespace audioeval;
using testsupport::TempDir;

TEST_CASE("wav serialize/parse round trip") {
  auto wav = audio::make_tone(16000);  // 1 s
  CHECK(wav.duration_s() == Catch::Approx(1.0));
  auto bytes = audio::serialize_wav(wav);
  auto back = audio::parse_wav(bytes);
  CHECK(back.sample_rate == 16000);
  CHECK(back.channels == 1);
  CHECK(back.bits_per_sample == 16);
  CHECK(back.pcm == wav.pcm);
}

TEST_CASE("wav format guards") {
  CHECK_THROWS_AS(audio::parse_wav("not a wav"), FormatError);

  auto stereo = audio::make_tone(100);
  stereo.channels = 2;
  CHECK_THROWS_AS(audio::require_harness_format(stereo, "x"), FormatError);

  auto slow = audio::make_tone(100);
  slow.sample_rate = 8000;
  CHECK_THROWS_AS(audio::require_harness_format(slow, "x"), FormatError);

  CHECK_THROWS_AS(audio::read_wav_file("/nonexistent/file.wav"), IoError);
}

TEST_CASE("encode_audio_part without chunking") {
  TempDir dir("audio");
  auto path = testsupport::make_wav_file(dir.path(), "a.wav", 5.0);

  auto parts = client::encode_audio_part(path, std::nullopt);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].kind == client::PartKind::kInputAudio);
  auto decoded = audio::parse_wav(util::base64_decode(parts[0].audio_b64));
  CHECK(decoded.duration_s() == Catch::Approx(5.0));

  // chunk_s larger than the clip: still a single part
  CHECK(client::encode_audio_part(path, 10.0).size() == 1);
}

TEST_CASE("encode_audio_part chunks losslessly") {
  TempDir dir("audio");
  auto path = testsupport::make_wav_file(dir.path(), "five.wav", 5.0);
  auto original = audio::read_wav_file(path);

  auto parts = client::encode_audio_part(path, 2.0);  // ceil(5/2) = 3
  REQUIRE(parts.size() == 3);

  std::string concatenated;
  std::vector<double> durations;
  for (const auto& p : parts) {
    auto wav = audio::parse_wav(util::base64_decode(p.audio_b64));
    CHECK(wav.sample_rate == audio::kSampleRate);
    CHECK(wav.channels == 1);
    durations.push_back(wav.duration_s());
    concatenated += wav.pcm;
  }
  CHECK(durations[0] == Catch::Approx(2.0));
  CHECK(durations[1] == Catch::Approx(2.0));
  CHECK(durations[2] == Catch::Approx(1.0));
  CHECK(concatenated == original.pcm);

  // exact multiple: no runt chunk
  auto path4 = testsupport::make_wav_file(dir.path(), "four.wav", 4.0);
  CHECK(client::encode_audio_part(path4, 2.0).size() == 2);
}

TEST_CASE("encode_audio_part rejects non-harness formats") {
  TempDir dir("audio");
  auto stereo = audio::make_tone(1600);
  stereo.channels = 2;
  auto path = dir.file("stereo.wav").string();
  audio::write_wav_file(path, stereo);
  CHECK_THROWS_AS(client::encode_audio_part(path, std::nullopt), FormatError);
}
