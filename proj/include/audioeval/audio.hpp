#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "audioeval/errors.hpp"

namespace audioeval::audio {

// The one audio format this harness speaks: WAV, PCM, 16 kHz, 16-bit, mono.
inline constexpr uint32_t kSampleRate = 16000;
inline constexpr uint16_t kBitsPerSample = 16;
inline constexpr uint16_t kChannels = 1;
inline constexpr size_t kBytesPerSample = 2;

struct WavData {
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits_per_sample = 0;
  std::string pcm;  // raw sample payload

  size_t sample_count() const {
    size_t frame = static_cast<size_t>(channels) * (bits_per_sample / 8);
    return frame == 0 ? 0 : pcm.size() / frame;
  }
  double duration_s() const {
    return sample_rate == 0 ? 0.0
                            : static_cast<double>(sample_count()) / sample_rate;
  }
};

namespace detail {

inline uint32_t read_u32(const std::string& b, size_t off) {
  return uint32_t(uint8_t(b[off])) | uint32_t(uint8_t(b[off + 1])) << 8 |
         uint32_t(uint8_t(b[off + 2])) << 16 | uint32_t(uint8_t(b[off + 3])) << 24;
}

inline uint16_t read_u16(const std::string& b, size_t off) {
  return uint16_t(uint8_t(b[off])) | uint16_t(uint8_t(b[off + 1])) << 8;
}

inline void put_u32(std::string& b, uint32_t v) {
  b.push_back(char(v & 0xff));
  b.push_back(char((v >> 8) & 0xff));
  b.push_back(char((v >> 16) & 0xff));
  b.push_back(char((v >> 24) & 0xff));
}

inline void put_u16(std::string& b, uint16_t v) {
  b.push_back(char(v & 0xff));
  b.push_back(char((v >> 8) & 0xff));
}

}  // namespace detail

// Parses a RIFF/WAVE byte buffer. Walks the chunk list, so extra chunks
// (LIST, fact, ...) are tolerated. Throws FormatError on non-PCM or a
// structurally broken file.
inline WavData parse_wav(const std::string& bytes) {
  using namespace detail;
  if (bytes.size() < 44 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0)
    throw FormatError("not a RIFF/WAVE file");

  WavData wav;
  bool have_fmt = false, have_data = false;
  size_t off = 12;
  while (off + 8 <= bytes.size()) {
    std::string id = bytes.substr(off, 4);
    uint32_t size = read_u32(bytes, off + 4);
    size_t body = off + 8;
    if (body + size > bytes.size())
      throw FormatError("truncated WAV chunk: " + id);
    if (id == "fmt ") {
      if (size < 16) throw FormatError("fmt chunk too small");
      uint16_t audio_format = read_u16(bytes, body);
      if (audio_format != 1) throw FormatError("not PCM (fmt tag " + std::to_string(audio_format) + ")");
      wav.channels = read_u16(bytes, body + 2);
      wav.sample_rate = read_u32(bytes, body + 4);
      wav.bits_per_sample = read_u16(bytes, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      wav.pcm = bytes.substr(body, size);
      have_data = true;
    }
    off = body + size + (size & 1);  // chunks are word-aligned
  }
  if (!have_fmt || !have_data) throw FormatError("missing fmt or data chunk");
  return wav;
}

// Serializes PCM into a canonical 44-byte-header WAV.
inline std::string serialize_wav(const WavData& wav) {
  using namespace detail;
  std::string out;
  out.reserve(44 + wav.pcm.size());
  uint16_t block_align = static_cast<uint16_t>(wav.channels * (wav.bits_per_sample / 8));
  uint32_t byte_rate = wav.sample_rate * block_align;
  out += "RIFF";
  put_u32(out, static_cast<uint32_t>(36 + wav.pcm.size()));
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, wav.channels);
  put_u32(out, wav.sample_rate);
  put_u32(out, byte_rate);
  put_u16(out, block_align);
  put_u16(out, wav.bits_per_sample);
  out += "data";
  put_u32(out, static_cast<uint32_t>(wav.pcm.size()));
  out += wav.pcm;
  return out;
}

inline WavData read_wav_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open audio file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

inline void write_wav_file(const std::string& path, const WavData& wav) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write audio file: " + path);
  std::string bytes = serialize_wav(wav);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("short write: " + path);
}

// Rejects anything that is not 16 kHz 16-bit mono PCM.
inline void require_harness_format(const WavData& wav, const std::string& origin) {
  if (wav.channels != kChannels)
    throw FormatError(origin + ": expected mono, got " + std::to_string(wav.channels) + " channels");
  if (wav.sample_rate != kSampleRate)
    throw FormatError(origin + ": expected 16000 Hz, got " + std::to_string(wav.sample_rate));
  if (wav.bits_per_sample != kBitsPerSample)
    throw FormatError(origin + ": expected 16-bit samples, got " + std::to_string(wav.bits_per_sample));
}

// Splits PCM on sample boundaries into ceil(duration / chunk_s) consecutive
// pieces. Concatenating the pieces reproduces the input exactly.
inline std::vector<std::string> chunk_pcm(const std::string& pcm, double chunk_s) {
  size_t chunk_samples = static_cast<size_t>(chunk_s * kSampleRate);
  if (chunk_samples == 0) chunk_samples = 1;
  size_t chunk_bytes = chunk_samples * kBytesPerSample;
  std::vector<std::string> out;
  for (size_t off = 0; off < pcm.size(); off += chunk_bytes)
    out.push_back(pcm.substr(off, std::min(chunk_bytes, pcm.size() - off)));
  if (out.empty()) out.push_back("");
  return out;
}

// Test/demo helper: n_samples of a quiet square wave.
inline WavData make_tone(size_t n_samples, int16_t amplitude = 2000, size_t period = 160) {
  WavData wav;
  wav.channels = kChannels;
  wav.sample_rate = kSampleRate;
  wav.bits_per_sample = kBitsPerSample;
  wav.pcm.resize(n_samples * kBytesPerSample);
  for (size_t i = 0; i < n_samples; ++i) {
    int16_t v = (i / period) % 2 == 0 ? amplitude : static_cast<int16_t>(-amplitude);
    std::memcpy(&wav.pcm[i * 2], &v, 2);
  }
  return wav;
}

}  // namespace audioeval::audio
