#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "audioeval/config.hpp"
#include "audioeval/errors.hpp"
#include "audioeval/util.hpp"

namespace audioeval::dataset {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class TurnRole { kUser, kAssistantReference };

struct Turn {
  TurnRole role = TurnRole::kUser;
  std::optional<std::string> text;
  std::optional<int> audio_index;  // into SampleRecord::audio
  bool operator==(const Turn&) const = default;
};

enum class ReferenceKind { kPlainText, kSpeakerTagged, kStructured };

inline std::string reference_kind_name(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::kPlainText: return "plain_text";
    case ReferenceKind::kSpeakerTagged: return "speaker_tagged";
    case ReferenceKind::kStructured: return "structured";
  }
  return "?";
}

struct ReferenceTarget {
  ReferenceKind kind = ReferenceKind::kPlainText;
  std::string value;
  bool operator==(const ReferenceTarget&) const = default;
};

struct AudioRef {
  std::string path;      // resolved against the manifest directory
  double duration_s = 0;
  bool operator==(const AudioRef&) const = default;
};

struct SampleRecord {
  std::string sample_id;
  std::vector<AudioRef> audio;
  double audio_duration_s = 0;  // sum over audio entries
  std::vector<Turn> turns;
  ReferenceTarget reference;
  std::map<std::string, std::string> metadata;
  bool operator==(const SampleRecord&) const = default;

  size_t user_turn_count() const {
    size_t n = 0;
    for (const auto& t : turns)
      if (t.role == TurnRole::kUser) ++n;
    return n;
  }
};

struct Shard {
  std::string endpoint_name;
  std::vector<SampleRecord> samples;
};

// ---------------------------------------------------------------------------
// Manifest ingestion (JSON lines, one sample per line)
// ---------------------------------------------------------------------------

namespace detail {

inline SampleRecord parse_sample_line(const json& j, int line,
                                      const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ManifestError(line, "record must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "sample_id" && k != "audio" && k != "turns" && k != "reference" &&
        k != "metadata")
      throw ManifestError(line, "unknown field " + k);
  }

  SampleRecord s;
  auto need = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end())
      throw ManifestError(line, std::string("missing field ") + key);
    return *it;
  };

  const json& sid = need("sample_id");
  if (!sid.is_string() || sid.get<std::string>().empty())
    throw ManifestError(line, "sample_id must be a non-empty string");
  s.sample_id = sid.get<std::string>();

  if (auto it = j.find("audio"); it != j.end()) {
    if (!it->is_array()) throw ManifestError(line, "audio must be a list");
    for (const auto& a : *it) {
      if (!a.is_object() || !a.contains("path") || !a.contains("duration_s") ||
          !a["path"].is_string() || !a["duration_s"].is_number())
        throw ManifestError(line, "audio entries need {path, duration_s}");
      AudioRef ref;
      std::filesystem::path p = a["path"].get<std::string>();
      ref.path = p.is_absolute() ? p.string() : (base_dir / p).string();
      ref.duration_s = a["duration_s"].get<double>();
      if (ref.duration_s < 0)
        throw ManifestError(line, "audio duration_s must be >= 0");
      if (!std::filesystem::exists(ref.path))
        throw ManifestError(line, "audio file not found: " + ref.path);
      s.audio.push_back(std::move(ref));
      s.audio_duration_s += s.audio.back().duration_s;
    }
  }

  const json& turns = need("turns");
  if (!turns.is_array() || turns.empty())
    throw ManifestError(line, "turns must be a non-empty list");
  for (const auto& tj : turns) {
    if (!tj.is_object()) throw ManifestError(line, "turn must be an object");
    Turn t;
    std::string role = tj.value("role", "");
    if (role == "user")
      t.role = TurnRole::kUser;
    else if (role == "assistant-reference")
      t.role = TurnRole::kAssistantReference;
    else
      throw ManifestError(line, "turn role must be user or assistant-reference");
    if (tj.contains("text")) {
      if (!tj["text"].is_string())
        throw ManifestError(line, "turn text must be a string");
      t.text = tj["text"].get<std::string>();
    }
    if (tj.contains("audio_index")) {
      if (!tj["audio_index"].is_number_integer())
        throw ManifestError(line, "audio_index must be an integer");
      t.audio_index = tj["audio_index"].get<int>();
      if (*t.audio_index < 0 ||
          static_cast<size_t>(*t.audio_index) >= s.audio.size())
        throw ManifestError(line, "audio_index out of range");
    }
    if (!t.text && !t.audio_index)
      throw ManifestError(line, "turn needs text and/or audio_index");
    s.turns.push_back(std::move(t));
  }
  if (s.user_turn_count() == 0)
    throw ManifestError(line, "sample has no user turns");

  const json& ref = need("reference");
  if (!ref.is_object() || !ref.contains("kind") || !ref.contains("value") ||
      !ref["kind"].is_string() || !ref["value"].is_string())
    throw ManifestError(line, "reference needs {kind, value}");
  std::string kind = ref["kind"].get<std::string>();
  if (kind == "plain_text")
    s.reference.kind = ReferenceKind::kPlainText;
  else if (kind == "speaker_tagged")
    s.reference.kind = ReferenceKind::kSpeakerTagged;
  else if (kind == "structured")
    s.reference.kind = ReferenceKind::kStructured;
  else
    throw ManifestError(line, "unknown reference kind " + kind);
  s.reference.value = ref["value"].get<std::string>();

  if (auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object()) throw ManifestError(line, "metadata must be a mapping");
    for (auto kv = it->begin(); kv != it->end(); ++kv) {
      if (!kv.value().is_string())
        throw ManifestError(line, "metadata values must be strings");
      s.metadata[kv.key()] = kv.value().get<std::string>();
    }
  }
  return s;
}

}  // namespace detail

// Loads a JSONL manifest in file order. Durations come from the manifest;
// referenced audio files are checked for existence but never decoded here.
inline std::vector<SampleRecord> load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest: " + path);
  std::filesystem::path base_dir = std::filesystem::path(path).parent_path();

  std::vector<SampleRecord> out;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ManifestError(line_no, std::string("invalid JSON: ") + e.what());
    }
    SampleRecord s = detail::parse_sample_line(j, line_no, base_dir);
    if (!seen.insert(s.sample_id).second)
      throw DuplicateIdError("duplicate sample_id \"" + s.sample_id + "\" at line " +
                             std::to_string(line_no));
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering
// ---------------------------------------------------------------------------

// Duration/metadata predicates keep manifest order. max_samples selects the
// first max_samples of a seed-keyed shuffle (avoiding manifest-order bias)
// and the survivors are emitted back in manifest order, which also makes the
// operation idempotent.
inline std::vector<SampleRecord> apply_filters(std::vector<SampleRecord> samples,
                                               const config::FilterSpec& f,
                                               long long seed) {
  std::vector<SampleRecord> kept;
  for (auto& s : samples) {
    if (f.min_audio_s && s.audio_duration_s < *f.min_audio_s) continue;
    if (f.max_audio_s && s.audio_duration_s > *f.max_audio_s) continue;
    bool meta_ok = true;
    for (const auto& [k, v] : f.metadata_equals) {
      auto it = s.metadata.find(k);
      if (it == s.metadata.end() || it->second != v) {
        meta_ok = false;
        break;
      }
    }
    if (!meta_ok) continue;
    kept.push_back(std::move(s));
  }

  if (f.max_samples && kept.size() > static_cast<size_t>(*f.max_samples)) {
    std::vector<size_t> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    util::deterministic_shuffle(order, static_cast<uint64_t>(seed));
    order.resize(static_cast<size_t>(*f.max_samples));
    std::sort(order.begin(), order.end());  // restore manifest order
    std::vector<SampleRecord> sampled;
    sampled.reserve(order.size());
    for (size_t idx : order) sampled.push_back(std::move(kept[idx]));
    kept = std::move(sampled);
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Sharding
// ---------------------------------------------------------------------------

// Largest-remainder apportionment of n items proportional to capacities.
// Integer arithmetic throughout; remainder ties go to the lower index.
inline std::vector<size_t> apportion_largest_remainder(size_t n,
                                                       const std::vector<int>& capacities) {
  const size_t k = capacities.size();
  long long total = 0;
  for (int c : capacities) total += c;
  std::vector<size_t> sizes(k, 0);
  if (k == 0 || total <= 0) return sizes;

  std::vector<long long> rem(k);
  long long assigned = 0;
  for (size_t i = 0; i < k; ++i) {
    long long num = static_cast<long long>(n) * capacities[i];
    sizes[i] = static_cast<size_t>(num / total);
    rem[i] = num % total;
    assigned += static_cast<long long>(sizes[i]);
  }
  long long leftover = static_cast<long long>(n) - assigned;
  std::vector<size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return rem[a] > rem[b]; });
  for (size_t r = 0; r < static_cast<size_t>(leftover); ++r) ++sizes[idx[r]];
  return sizes;
}

// Contiguous, disjoint, covering slices of the (filtered, ordered) sample
// list, sized proportionally to endpoint capacity.
inline std::vector<Shard> shard_dataset(const std::vector<SampleRecord>& samples,
                                        const std::vector<config::EndpointSpec>& endpoints) {
  std::vector<int> capacities;
  capacities.reserve(endpoints.size());
  for (const auto& e : endpoints) capacities.push_back(e.capacity);
  std::vector<size_t> sizes = apportion_largest_remainder(samples.size(), capacities);

  std::vector<Shard> shards;
  shards.reserve(endpoints.size());
  size_t off = 0;
  for (size_t i = 0; i < endpoints.size(); ++i) {
    Shard shard;
    shard.endpoint_name = endpoints[i].name;
    shard.samples.assign(samples.begin() + static_cast<long>(off),
                         samples.begin() + static_cast<long>(off + sizes[i]));
    off += sizes[i];
    shards.push_back(std::move(shard));
  }
  return shards;
}

}  // namespace audioeval::dataset
