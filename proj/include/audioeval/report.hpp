#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "audioeval/config.hpp"
#include "audioeval/errors.hpp"
#include "audioeval/metrics.hpp"

namespace audioeval::report {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// ---------------------------------------------------------------------------
// Per-sample results
// ---------------------------------------------------------------------------

struct SampleResult {
  std::string sample_id;
  std::string model_name;
  std::string task_name;
  std::string category;
  std::vector<metrics::MetricValue> metric_values;
  // metric name -> why it produced no value (terminal prediction error,
  // empty reference, judge parse failure, ...). Exactly the task's assigned
  // metrics appear either here or in metric_values.
  std::map<std::string, std::string> metric_errors;
  double latency_s = 0.0;  // volatile; serialized into timing outputs only
  double audio_duration_s = 0.0;
  int attempts = 0;
  std::optional<std::string> error;  // terminal prediction error

  // Deterministic serialization: no wall-clock-derived fields.
  json to_json() const {
    json values = json::array();
    for (const auto& v : metric_values)
      values.push_back({{"metric_name", v.metric_name},
                        {"value", v.value},
                        {"scale", metrics::scale_name(v.scale)}});
    json j = {{"sample_id", sample_id},
              {"model_name", model_name},
              {"task_name", task_name},
              {"category", category},
              {"metric_values", values},
              {"attempts", attempts},
              {"audio_duration_s", audio_duration_s}};
    if (!metric_errors.empty()) j["metric_errors"] = metric_errors;
    if (error) j["error"] = *error;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct AggregateEntry {
  std::map<std::string, std::string> dims;  // dimension name -> group value
  std::string reducer;
  double value = 0.0;
  std::string scale;
  long long sample_count = 0;  // contributing non-errored values
  long long errors = 0;        // excluded values in this group

  bool has_value() const { return sample_count > 0; }

  std::string key() const {
    std::string k;
    for (const auto& [d, v] : dims) {
      if (!k.empty()) k += "|";
      k += d + "=" + v;
    }
    return k;
  }

  json to_json() const {
    json j = {{"dimensions", dims},
              {"reducer", reducer},
              {"sample_count", sample_count},
              {"errors", errors}};
    if (has_value()) {
      j["value"] = value;
      j["scale"] = scale;
    }
    return j;
  }
};

namespace detail {

struct UnitRecord {
  std::string task, category, model, metric;
  double value = 0.0;
  metrics::Scale scale = metrics::Scale::kFraction;
  bool errored = false;
};

inline std::vector<UnitRecord> unit_records(const std::vector<SampleResult>& results) {
  std::vector<UnitRecord> units;
  for (const auto& r : results) {
    for (const auto& v : r.metric_values)
      units.push_back({r.task_name, r.category, r.model_name, v.metric_name,
                       v.value, v.scale, false});
    for (const auto& [metric, reason] : r.metric_errors)
      units.push_back({r.task_name, r.category, r.model_name, metric, 0.0,
                       metrics::Scale::kFraction, true});
  }
  return units;
}

inline std::map<std::string, std::string> dims_for(
    const UnitRecord& u, const std::vector<config::AggDimension>& dims) {
  std::map<std::string, std::string> out;
  for (auto d : dims) {
    switch (d) {
      case config::AggDimension::kTask: out["task"] = u.task; break;
      case config::AggDimension::kCategory: out["category"] = u.category; break;
      case config::AggDimension::kModel: out["model"] = u.model; break;
      case config::AggDimension::kMetric: out["metric"] = u.metric; break;
    }
  }
  return out;
}

}  // namespace detail

// Groups scored values along the spec's dimensions. Errored values never
// contribute to means but are tallied per group. `mean` averages the sample
// values directly; `weighted_mean_by_sample_count` rolls the finest
// (task, model, metric) subgroup means upward weighted by subgroup size.
inline std::vector<AggregateEntry> aggregate(const std::vector<SampleResult>& results,
                                             const config::AggregationSpec& spec) {
  auto units = detail::unit_records(results);

  struct Group {
    std::map<std::string, std::string> dims;
    std::vector<const detail::UnitRecord*> values;
    long long errors = 0;
  };
  std::map<std::string, Group> groups;
  for (const auto& u : units) {
    auto dims = detail::dims_for(u, spec.dimensions);
    std::string key;
    for (const auto& [d, v] : dims) key += d + "=" + v + "|";
    auto& g = groups[key];
    g.dims = dims;
    if (u.errored)
      ++g.errors;
    else
      g.values.push_back(&u);
  }

  std::vector<AggregateEntry> out;
  for (auto& [key, g] : groups) {
    AggregateEntry e;
    e.dims = g.dims;
    e.reducer = spec.reducer == config::Reducer::kMean
                    ? "mean"
                    : "weighted_mean_by_sample_count";
    e.errors = g.errors;
    e.sample_count = static_cast<long long>(g.values.size());
    if (!g.values.empty()) {
      if (spec.reducer == config::Reducer::kMean) {
        double sum = 0;
        for (const auto* u : g.values) sum += u->value;
        e.value = sum / static_cast<double>(g.values.size());
      } else {
        // subgroup means at (task, model, metric) granularity, then a
        // sample-count-weighted rollup
        std::map<std::string, std::pair<double, long long>> sub;  // sum, n
        for (const auto* u : g.values) {
          auto& s = sub[u->task + "\x1f" + u->model + "\x1f" + u->metric];
          s.first += u->value;
          ++s.second;
        }
        double weighted = 0;
        long long total = 0;
        for (const auto& [k, s] : sub) {
          weighted += (s.first / static_cast<double>(s.second)) *
                      static_cast<double>(s.second);
          total += s.second;
        }
        e.value = weighted / static_cast<double>(total);
      }
      bool uniform = true;
      for (const auto* u : g.values)
        if (u->scale != g.values.front()->scale) uniform = false;
      e.scale = uniform ? metrics::scale_name(g.values.front()->scale) : "mixed";
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const AggregateEntry& a, const AggregateEntry& b) {
              return a.key() < b.key();
            });
  return out;
}

// ---------------------------------------------------------------------------
// Run report
// ---------------------------------------------------------------------------

struct ModelEfficiency {
  std::string model_name;
  metrics::EfficiencyRecord record;
  std::optional<double> rtf;  // absent when no audio was processed
  std::optional<double> samples_per_second;
};

struct TaskTiming {
  std::string task_name;
  double wall_clock_s = 0.0;
  std::vector<ModelEfficiency> per_model;
};

struct RunReport {
  std::string schema_version = kSchemaVersion;
  std::string config_fingerprint;
  long long seed = 0;
  std::map<std::string, std::string> judge_templates;  // mode -> version
  std::vector<SampleResult> per_sample;
  std::vector<AggregateEntry> aggregates;
  // Wall-clock-derived numbers live below; they are written to timing.json /
  // summary.md, never to results.jsonl / report.json, which stay
  // byte-identical across reruns with identical endpoint behavior.
  std::vector<TaskTiming> timing;
  std::optional<metrics::ScenarioRuntimes> scenario;
};

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  f.flush();
  if (!f) throw IoError("short write " + path.string());
}

inline json deterministic_report_json(const RunReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["config_fingerprint"] = r.config_fingerprint;
  j["seed"] = r.seed;
  if (!r.judge_templates.empty()) j["judge_templates"] = r.judge_templates;
  long long errored = 0;
  for (const auto& s : r.per_sample)
    if (s.error) ++errored;
  j["counts"] = {{"samples", r.per_sample.size()}, {"errored", errored}};
  j["aggregates"] = json::array();
  for (const auto& a : r.aggregates) j["aggregates"].push_back(a.to_json());
  j["per_sample"] = json::array();
  for (const auto& s : r.per_sample) j["per_sample"].push_back(s.to_json());
  return j;
}

inline json timing_json(const RunReport& r) {
  json tasks = json::array();
  for (const auto& t : r.timing) {
    json models = json::array();
    for (const auto& m : t.per_model) {
      json mj = {{"model_name", m.model_name},
                 {"total_audio_s", m.record.total_audio_s},
                 {"wall_clock_s", m.record.wall_clock_s},
                 {"samples_processed", m.record.samples_processed}};
      if (m.rtf) mj["rtf"] = *m.rtf;
      if (m.samples_per_second) mj["samples_per_second"] = *m.samples_per_second;
      models.push_back(mj);
    }
    tasks.push_back({{"task_name", t.task_name},
                     {"wall_clock_s", t.wall_clock_s},
                     {"models", models}});
  }
  json j = {{"schema_version", r.schema_version}, {"tasks", tasks}};
  if (r.scenario)
    j["scenario"] = {{"sequential_s", r.scenario->sequential},
                     {"parallel_s", r.scenario->parallel}};
  return j;
}

inline std::string summary_markdown(const RunReport& r) {
  std::string md = "# Run summary\n\n";
  md += "- config fingerprint: `" + r.config_fingerprint + "`\n";
  md += "- seed: " + std::to_string(r.seed) + "\n";
  md += "- samples: " + std::to_string(r.per_sample.size()) + "\n";
  for (const auto& [mode, version] : r.judge_templates)
    md += "- judge template (" + mode + "): " + version + "\n";

  md += "\n## Scores\n\n";
  md += "| group | reducer | value | scale | n | errors |\n";
  md += "|---|---|---|---|---|---|\n";
  char buf[64];
  for (const auto& a : r.aggregates) {
    std::string value = "-";
    if (a.has_value()) {
      std::snprintf(buf, sizeof(buf), "%.4f", a.value);
      value = buf;
    }
    md += "| " + a.key() + " | " + a.reducer + " | " + value + " | " +
          (a.has_value() ? a.scale : std::string("-")) + " | " +
          std::to_string(a.sample_count) + " | " + std::to_string(a.errors) +
          " |\n";
  }

  if (!r.timing.empty()) {
    md += "\n## Efficiency (measured)\n\n";
    md += "| task | model | wall s | audio s | samples | RTF | samples/s |\n";
    md += "|---|---|---|---|---|---|---|\n";
    for (const auto& t : r.timing) {
      for (const auto& m : t.per_model) {
        auto fmt = [&](std::optional<double> v) -> std::string {
          if (!v) return "-";
          std::snprintf(buf, sizeof(buf), "%.4f", *v);
          return buf;
        };
        std::snprintf(buf, sizeof(buf), "%.3f", m.record.wall_clock_s);
        std::string wall = buf;
        std::snprintf(buf, sizeof(buf), "%.3f", m.record.total_audio_s);
        std::string audio = buf;
        md += "| " + t.task_name + " | " + m.model_name + " | " + wall + " | " +
              audio + " | " + std::to_string(m.record.samples_processed) +
              " | " + fmt(m.rtf) + " | " + fmt(m.samples_per_second) + " |\n";
      }
    }
    if (r.scenario) {
      std::snprintf(buf, sizeof(buf), "%.3f", r.scenario->sequential);
      std::string seq = buf;
      std::snprintf(buf, sizeof(buf), "%.3f", r.scenario->parallel);
      std::string par = buf;
      md += "\nScenario runtimes: sequential " + seq + " s, parallel " + par + " s\n";
    }
  }
  return md;
}

}  // namespace detail

// Writes results.jsonl, report.json, timing.json and summary.md. The first
// two are byte-stable for identical report contents.
inline void write_outputs(const RunReport& r, const std::string& dir) {
  std::filesystem::path out(dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec && !std::filesystem::is_directory(out))
    throw IoError("cannot create output dir " + out.string());

  std::string jsonl;
  for (const auto& s : r.per_sample) jsonl += s.to_json().dump() + "\n";
  detail::write_file(out / "results.jsonl", jsonl);
  detail::write_file(out / "report.json",
                     detail::deterministic_report_json(r).dump(2) + "\n");
  detail::write_file(out / "timing.json", detail::timing_json(r).dump(2) + "\n");
  detail::write_file(out / "summary.md", detail::summary_markdown(r));
}

}  // namespace audioeval::report
