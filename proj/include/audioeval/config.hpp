#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "audioeval/errors.hpp"
#include "audioeval/metrics.hpp"
#include "audioeval/util.hpp"

namespace audioeval::config {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Task categories
// ---------------------------------------------------------------------------

enum class Category {
  kSpeechRecognition,
  kParalinguistics,
  kAudioUnderstanding,
  kSpokenLanguageUnderstanding,
  kSpokenLanguageReasoning,
  kSafetySecurity,
};

inline const std::vector<std::pair<std::string, Category>>& category_table() {
  static const std::vector<std::pair<std::string, Category>> kTable = {
      {"speech_recognition", Category::kSpeechRecognition},
      {"paralinguistics", Category::kParalinguistics},
      {"audio_understanding", Category::kAudioUnderstanding},
      {"spoken_language_understanding", Category::kSpokenLanguageUnderstanding},
      {"spoken_language_reasoning", Category::kSpokenLanguageReasoning},
      {"safety_security", Category::kSafetySecurity},
  };
  return kTable;
}

inline std::string category_name(Category c) {
  for (const auto& [name, cat] : category_table())
    if (cat == c) return name;
  return "?";
}

// Case-insensitive lookup so CLI filters like "Paralinguistics" work.
inline std::optional<Category> parse_category(std::string_view s) {
  std::string lower = util::to_lower_ascii(s);
  for (const auto& [name, cat] : category_table())
    if (name == lower) return cat;
  return std::nullopt;
}

inline std::string valid_categories_hint() {
  std::string out;
  for (const auto& [name, cat] : category_table()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct EndpointSpec {
  std::string name;
  std::string base_url;
  std::string model_id;
  std::string api_key_env;  // may name an unset/empty var: no auth header sent
  int capacity = 1;
  int retry_limit = 0;
  double timeout_s = 30.0;
  std::optional<double> audio_chunk_s;
  std::optional<double> temperature;
  std::optional<int> max_tokens;
  bool operator==(const EndpointSpec&) const = default;
};

enum class JudgeMode { kBinary, kDetailed };

struct JudgeSpec {
  EndpointSpec endpoint;  // inline spec; judge endpoints never receive shards
  JudgeMode judge_mode = JudgeMode::kBinary;
  int judge_concurrency = 1;
  bool operator==(const JudgeSpec&) const = default;
};

struct TaskSpec {
  std::string task_name;
  Category category = Category::kSpeechRecognition;
  std::string dataset_path;
  std::vector<std::string> metric_names;
  std::optional<double> temperature;
  std::optional<int> max_tokens;
  std::string prompt_template;
  bool multi_turn = false;
  std::optional<JudgeSpec> judge;
  bool operator==(const TaskSpec&) const = default;
};

struct FilterSpec {
  std::optional<double> min_audio_s;
  std::optional<double> max_audio_s;
  std::optional<int> max_samples;
  std::map<std::string, std::string> metadata_equals;
  bool operator==(const FilterSpec&) const = default;

  bool empty() const {
    return !min_audio_s && !max_audio_s && !max_samples && metadata_equals.empty();
  }
};

enum class AggDimension { kTask, kCategory, kModel, kMetric };

inline std::string agg_dimension_name(AggDimension d) {
  switch (d) {
    case AggDimension::kTask: return "task";
    case AggDimension::kCategory: return "category";
    case AggDimension::kModel: return "model";
    case AggDimension::kMetric: return "metric";
  }
  return "?";
}

enum class Reducer { kMean, kWeightedMeanBySampleCount };

struct AggregationSpec {
  std::vector<AggDimension> dimensions;
  Reducer reducer = Reducer::kMean;
  bool operator==(const AggregationSpec&) const = default;
};

struct RunConfig {
  std::vector<EndpointSpec> endpoints;
  std::vector<TaskSpec> tasks;
  std::map<std::string, FilterSpec> filters;  // keyed by task_name
  std::vector<AggregationSpec> aggregations;
  int global_permit_limit = 8;
  int stagger_ms = 0;
  std::string output_dir = "runs";
  long long seed = 0;
  bool operator==(const RunConfig&) const = default;
};

// Built-in defaults sit at the bottom of the endpoint > task > default chain.
inline constexpr double kDefaultTemperature = 0.0;
inline constexpr int kDefaultMaxTokens = 1024;

struct EffectiveSettings {
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;
  double timeout_s = 30.0;
  int retry_limit = 0;
  std::optional<double> audio_chunk_s;
  bool operator==(const EffectiveSettings&) const = default;
};

// Precedence is total: endpoint value, else task value, else built-in default.
inline EffectiveSettings resolve_effective_settings(const TaskSpec& task,
                                                    const EndpointSpec& endpoint) {
  EffectiveSettings s;
  s.temperature = endpoint.temperature.value_or(
      task.temperature.value_or(kDefaultTemperature));
  s.max_tokens = endpoint.max_tokens.value_or(
      task.max_tokens.value_or(kDefaultMaxTokens));
  s.timeout_s = endpoint.timeout_s;
  s.retry_limit = endpoint.retry_limit;
  s.audio_chunk_s = endpoint.audio_chunk_s;
  return s;
}

// ---------------------------------------------------------------------------
// YAML -> JSON
//
// Configs are written in YAML (JSON, being a YAML subset, parses too). The
// tree is converted to JSON once and all schema checks run on that.
// ---------------------------------------------------------------------------

namespace detail {

inline bool looks_like_int(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
      return nullptr;
    case YAML::NodeType::Scalar: {
      const std::string& s = n.Scalar();
      if (n.Tag() == "!") return s;  // quoted scalar stays a string
      if (s == "true") return true;
      if (s == "false") return false;
      if (s == "null" || s == "~") return nullptr;
      if (looks_like_int(s)) {
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (errno == 0 && end && *end == '\0') return v;
      }
      {
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end && end != s.c_str() && *end == '\0' && std::isfinite(v) &&
            s.find_first_not_of("+-.0123456789eE") == std::string::npos)
          return v;
      }
      return s;
    }
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : n) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : n) obj[kv.first.Scalar()] = yaml_to_json(kv.second);
      return obj;
    }
    default:
      return nullptr;
  }
}

// --- typed field access, every failure names the config path -------------

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigSchemaError(path, "unknown key \"" + it.key() + "\"");
  }
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigSchemaError(path + "." + key, "missing required field");
  return *it;
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigSchemaError(path, "expected a string");
  return v.get<std::string>();
}

inline long long as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer())
    throw ConfigSchemaError(path, "expected an integer");
  return v.get<long long>();
}

inline double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigSchemaError(path, "expected a number");
  return v.get<double>();
}

inline bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigSchemaError(path, "expected a boolean");
  return v.get<bool>();
}

inline const json& as_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigSchemaError(path, "expected a mapping");
  return v;
}

inline const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigSchemaError(path, "expected a list");
  return v;
}

inline EndpointSpec parse_endpoint(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path,
             {"name", "base_url", "model_id", "api_key_env", "capacity",
              "retry_limit", "timeout_s", "audio_chunk_s", "temperature",
              "max_tokens"});
  EndpointSpec e;
  e.name = as_string(require(j, path, "name"), path + ".name");
  if (e.name.empty()) throw ConfigInvariantError(path + ".name", "must be non-empty");
  e.base_url = as_string(require(j, path, "base_url"), path + ".base_url");
  e.model_id = as_string(require(j, path, "model_id"), path + ".model_id");
  e.api_key_env = as_string(require(j, path, "api_key_env"), path + ".api_key_env");
  e.capacity = static_cast<int>(as_int(require(j, path, "capacity"), path + ".capacity"));
  if (e.capacity < 1)
    throw ConfigInvariantError(path + ".capacity", "must be >= 1");
  e.retry_limit =
      static_cast<int>(as_int(require(j, path, "retry_limit"), path + ".retry_limit"));
  if (e.retry_limit < 0)
    throw ConfigInvariantError(path + ".retry_limit", "must be >= 0");
  e.timeout_s = as_double(require(j, path, "timeout_s"), path + ".timeout_s");
  if (!(e.timeout_s > 0))
    throw ConfigInvariantError(path + ".timeout_s", "must be > 0");
  if (auto it = j.find("audio_chunk_s"); it != j.end()) {
    e.audio_chunk_s = as_double(*it, path + ".audio_chunk_s");
    if (!(*e.audio_chunk_s > 0))
      throw ConfigInvariantError(path + ".audio_chunk_s", "must be > 0");
  }
  if (auto it = j.find("temperature"); it != j.end()) {
    e.temperature = as_double(*it, path + ".temperature");
    if (*e.temperature < 0.0 || *e.temperature > 2.0)
      throw ConfigInvariantError(path + ".temperature", "must be in [0, 2]");
  }
  if (auto it = j.find("max_tokens"); it != j.end()) {
    e.max_tokens = static_cast<int>(as_int(*it, path + ".max_tokens"));
    if (*e.max_tokens < 1)
      throw ConfigInvariantError(path + ".max_tokens", "must be >= 1");
  }
  return e;
}

inline JudgeSpec parse_judge(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path, {"endpoint", "judge_mode", "judge_concurrency"});
  JudgeSpec spec;
  spec.endpoint = parse_endpoint(require(j, path, "endpoint"), path + ".endpoint");
  std::string mode = as_string(require(j, path, "judge_mode"), path + ".judge_mode");
  if (mode == "binary")
    spec.judge_mode = JudgeMode::kBinary;
  else if (mode == "detailed")
    spec.judge_mode = JudgeMode::kDetailed;
  else
    throw ConfigSchemaError(path + ".judge_mode", "expected \"binary\" or \"detailed\"");
  spec.judge_concurrency = static_cast<int>(
      as_int(require(j, path, "judge_concurrency"), path + ".judge_concurrency"));
  if (spec.judge_concurrency < 1)
    throw ConfigInvariantError(path + ".judge_concurrency", "must be >= 1");
  return spec;
}

inline TaskSpec parse_task(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path,
             {"task_name", "category", "dataset_path", "metric_names",
              "temperature", "max_tokens", "prompt_template", "multi_turn",
              "judge"});
  TaskSpec t;
  t.task_name = as_string(require(j, path, "task_name"), path + ".task_name");
  if (t.task_name.empty())
    throw ConfigInvariantError(path + ".task_name", "must be non-empty");
  std::string cat = as_string(require(j, path, "category"), path + ".category");
  auto parsed = parse_category(cat);
  if (!parsed)
    throw ConfigSchemaError(path + ".category", "unknown category \"" + cat +
                                                    "\" (valid: " +
                                                    valid_categories_hint() + ")");
  t.category = *parsed;
  t.dataset_path = as_string(require(j, path, "dataset_path"), path + ".dataset_path");
  const json& metrics_arr =
      as_array(require(j, path, "metric_names"), path + ".metric_names");
  if (metrics_arr.empty())
    throw ConfigSchemaError(path + ".metric_names", "must be non-empty");
  for (size_t i = 0; i < metrics_arr.size(); ++i) {
    std::string mpath = path + ".metric_names[" + std::to_string(i) + "]";
    std::string name = as_string(metrics_arr[i], mpath);
    if (!metrics::find_metric(name))
      throw ConfigSchemaError(mpath, "unknown metric \"" + name + "\"");
    t.metric_names.push_back(name);
  }
  if (auto it = j.find("temperature"); it != j.end()) {
    t.temperature = as_double(*it, path + ".temperature");
    if (*t.temperature < 0.0 || *t.temperature > 2.0)
      throw ConfigInvariantError(path + ".temperature", "must be in [0, 2]");
  }
  if (auto it = j.find("max_tokens"); it != j.end()) {
    t.max_tokens = static_cast<int>(as_int(*it, path + ".max_tokens"));
    if (*t.max_tokens < 1)
      throw ConfigInvariantError(path + ".max_tokens", "must be >= 1");
  }
  t.prompt_template =
      as_string(require(j, path, "prompt_template"), path + ".prompt_template");
  t.multi_turn = as_bool(require(j, path, "multi_turn"), path + ".multi_turn");
  if (auto it = j.find("judge"); it != j.end())
    t.judge = parse_judge(*it, path + ".judge");

  // Judge-backed metrics need a judge block with the matching mode.
  for (const auto& name : t.metric_names) {
    const auto* d = metrics::find_metric(name);
    if (!d->needs_judge) continue;
    if (!t.judge)
      throw ConfigInvariantError(path + ".judge",
                                 "metric \"" + name + "\" requires a judge block");
    bool wants_binary = d->kind == metrics::MetricKind::kJudgeBinary;
    bool is_binary = t.judge->judge_mode == JudgeMode::kBinary;
    if (wants_binary != is_binary)
      throw ConfigInvariantError(
          path + ".judge.judge_mode",
          "metric \"" + name + "\" does not match the configured judge_mode");
  }
  return t;
}

inline FilterSpec parse_filter(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path, {"min_audio_s", "max_audio_s", "max_samples", "metadata_equals"});
  FilterSpec f;
  if (auto it = j.find("min_audio_s"); it != j.end())
    f.min_audio_s = as_double(*it, path + ".min_audio_s");
  if (auto it = j.find("max_audio_s"); it != j.end())
    f.max_audio_s = as_double(*it, path + ".max_audio_s");
  if (f.min_audio_s && f.max_audio_s && *f.min_audio_s > *f.max_audio_s)
    throw ConfigInvariantError(path + ".min_audio_s", "must be <= max_audio_s");
  if (auto it = j.find("max_samples"); it != j.end()) {
    f.max_samples = static_cast<int>(as_int(*it, path + ".max_samples"));
    if (*f.max_samples < 1)
      throw ConfigInvariantError(path + ".max_samples", "must be >= 1");
  }
  if (auto it = j.find("metadata_equals"); it != j.end()) {
    const json& obj = as_object(*it, path + ".metadata_equals");
    for (auto kv = obj.begin(); kv != obj.end(); ++kv)
      f.metadata_equals[kv.key()] =
          as_string(kv.value(), path + ".metadata_equals." + kv.key());
  }
  return f;
}

inline AggregationSpec parse_aggregation(const json& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path, {"dimensions", "reducer"});
  AggregationSpec a;
  const json& dims = as_array(require(j, path, "dimensions"), path + ".dimensions");
  if (dims.empty())
    throw ConfigInvariantError(path + ".dimensions", "must be non-empty");
  for (size_t i = 0; i < dims.size(); ++i) {
    std::string dpath = path + ".dimensions[" + std::to_string(i) + "]";
    std::string name = as_string(dims[i], dpath);
    AggDimension d;
    if (name == "task")
      d = AggDimension::kTask;
    else if (name == "category")
      d = AggDimension::kCategory;
    else if (name == "model")
      d = AggDimension::kModel;
    else if (name == "metric")
      d = AggDimension::kMetric;
    else
      throw ConfigSchemaError(dpath, "unknown dimension \"" + name +
                                         "\" (valid: task, category, model, metric)");
    for (AggDimension prev : a.dimensions)
      if (prev == d) throw ConfigInvariantError(dpath, "duplicate dimension");
    a.dimensions.push_back(d);
  }
  std::string reducer = as_string(require(j, path, "reducer"), path + ".reducer");
  if (reducer == "mean")
    a.reducer = Reducer::kMean;
  else if (reducer == "weighted_mean_by_sample_count")
    a.reducer = Reducer::kWeightedMeanBySampleCount;
  else
    throw ConfigSchemaError(path + ".reducer",
                            "expected \"mean\" or \"weighted_mean_by_sample_count\"");
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// parse / serialize
// ---------------------------------------------------------------------------

inline RunConfig config_from_json(const json& j) {
  using namespace detail;
  as_object(j, "$");
  check_keys(j, "$",
             {"endpoints", "tasks", "filters", "aggregations",
              "global_permit_limit", "stagger_ms", "output_dir", "seed"});
  RunConfig c;

  const json& endpoints = as_array(require(j, "$", "endpoints"), "endpoints");
  if (endpoints.empty()) throw ConfigSchemaError("endpoints", "must be non-empty");
  for (size_t i = 0; i < endpoints.size(); ++i) {
    std::string path = "endpoints[" + std::to_string(i) + "]";
    EndpointSpec e = parse_endpoint(endpoints[i], path);
    for (const auto& prev : c.endpoints)
      if (prev.name == e.name)
        throw ConfigSchemaError(path + ".name",
                                "duplicate endpoint name \"" + e.name + "\"");
    c.endpoints.push_back(std::move(e));
  }

  const json& tasks = as_array(require(j, "$", "tasks"), "tasks");
  if (tasks.empty()) throw ConfigSchemaError("tasks", "must be non-empty");
  for (size_t i = 0; i < tasks.size(); ++i) {
    std::string path = "tasks[" + std::to_string(i) + "]";
    TaskSpec t = parse_task(tasks[i], path);
    for (const auto& prev : c.tasks)
      if (prev.task_name == t.task_name)
        throw ConfigSchemaError(path + ".task_name",
                                "duplicate task name \"" + t.task_name + "\"");
    c.tasks.push_back(std::move(t));
  }

  if (auto it = j.find("filters"); it != j.end()) {
    const json& filters = as_object(*it, "filters");
    for (auto kv = filters.begin(); kv != filters.end(); ++kv) {
      std::string path = "filters." + kv.key();
      bool known = false;
      for (const auto& t : c.tasks)
        if (t.task_name == kv.key()) known = true;
      if (!known)
        throw ConfigInvariantError(path, "filter references unknown task");
      c.filters[kv.key()] = parse_filter(kv.value(), path);
    }
  }

  if (auto it = j.find("aggregations"); it != j.end()) {
    const json& aggs = as_array(*it, "aggregations");
    for (size_t i = 0; i < aggs.size(); ++i)
      c.aggregations.push_back(
          parse_aggregation(aggs[i], "aggregations[" + std::to_string(i) + "]"));
  } else {
    c.aggregations.push_back(
        {{AggDimension::kTask, AggDimension::kModel, AggDimension::kMetric},
         Reducer::kMean});
  }

  if (auto it = j.find("global_permit_limit"); it != j.end())
    c.global_permit_limit =
        static_cast<int>(as_int(*it, "global_permit_limit"));
  if (c.global_permit_limit < 1)
    throw ConfigInvariantError("global_permit_limit", "must be >= 1");

  if (auto it = j.find("stagger_ms"); it != j.end())
    c.stagger_ms = static_cast<int>(as_int(*it, "stagger_ms"));
  if (c.stagger_ms < 0)
    throw ConfigInvariantError("stagger_ms", "must be >= 0");

  if (auto it = j.find("output_dir"); it != j.end())
    c.output_dir = as_string(*it, "output_dir");
  if (auto it = j.find("seed"); it != j.end()) c.seed = as_int(*it, "seed");

  return c;
}

inline RunConfig parse_config(const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(source);
  } catch (const YAML::Exception& e) {
    throw ConfigSyntaxError(std::string("config syntax error: ") + e.what());
  }
  return config_from_json(detail::yaml_to_json(root));
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

namespace detail {

inline json endpoint_to_json(const EndpointSpec& e) {
  json j = {{"name", e.name},
            {"base_url", e.base_url},
            {"model_id", e.model_id},
            {"api_key_env", e.api_key_env},
            {"capacity", e.capacity},
            {"retry_limit", e.retry_limit},
            {"timeout_s", e.timeout_s}};
  if (e.audio_chunk_s) j["audio_chunk_s"] = *e.audio_chunk_s;
  if (e.temperature) j["temperature"] = *e.temperature;
  if (e.max_tokens) j["max_tokens"] = *e.max_tokens;
  return j;
}

}  // namespace detail

inline json config_to_json(const RunConfig& c) {
  json j;
  j["endpoints"] = json::array();
  for (const auto& e : c.endpoints) j["endpoints"].push_back(detail::endpoint_to_json(e));
  j["tasks"] = json::array();
  for (const auto& t : c.tasks) {
    json tj = {{"task_name", t.task_name},
               {"category", category_name(t.category)},
               {"dataset_path", t.dataset_path},
               {"metric_names", t.metric_names},
               {"prompt_template", t.prompt_template},
               {"multi_turn", t.multi_turn}};
    if (t.temperature) tj["temperature"] = *t.temperature;
    if (t.max_tokens) tj["max_tokens"] = *t.max_tokens;
    if (t.judge) {
      tj["judge"] = {
          {"endpoint", detail::endpoint_to_json(t.judge->endpoint)},
          {"judge_mode", t.judge->judge_mode == JudgeMode::kBinary ? "binary" : "detailed"},
          {"judge_concurrency", t.judge->judge_concurrency}};
    }
    j["tasks"].push_back(tj);
  }
  j["filters"] = json::object();
  for (const auto& [name, f] : c.filters) {
    json fj = json::object();
    if (f.min_audio_s) fj["min_audio_s"] = *f.min_audio_s;
    if (f.max_audio_s) fj["max_audio_s"] = *f.max_audio_s;
    if (f.max_samples) fj["max_samples"] = *f.max_samples;
    if (!f.metadata_equals.empty()) fj["metadata_equals"] = f.metadata_equals;
    j["filters"][name] = fj;
  }
  j["aggregations"] = json::array();
  for (const auto& a : c.aggregations) {
    json dims = json::array();
    for (auto d : a.dimensions) dims.push_back(agg_dimension_name(d));
    j["aggregations"].push_back(
        {{"dimensions", dims},
         {"reducer", a.reducer == Reducer::kMean ? "mean"
                                                 : "weighted_mean_by_sample_count"}});
  }
  j["global_permit_limit"] = c.global_permit_limit;
  j["stagger_ms"] = c.stagger_ms;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

// Canonical serialization: JSON text with sorted keys. JSON is a YAML subset,
// so parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
  return config_to_json(c).dump(2);
}

inline std::string config_fingerprint(const RunConfig& c) {
  return util::hex64(util::fnv1a64(serialize_config(c)));
}

}  // namespace audioeval::config
