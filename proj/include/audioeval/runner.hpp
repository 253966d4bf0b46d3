#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "audioeval/config.hpp"
#include "audioeval/dataset.hpp"
#include "audioeval/engine.hpp"
#include "audioeval/judge.hpp"
#include "audioeval/metrics.hpp"
#include "audioeval/report.hpp"
#include "audioeval/scheduler.hpp"

namespace audioeval::runner {

struct RunOptions {
  std::optional<std::string> output_dir_override;
  std::vector<config::Category> categories;  // empty = all
  bool write_files = true;
  int verbosity = 1;
};

struct RunOutcome {
  report::RunReport report;
  std::vector<engine::RawPrediction> predictions;
  std::string output_dir;
  // 0: every task produced predictions; 2: some task had zero successes.
  int exit_code = 0;
};

namespace detail {

inline void progress(const RunOptions& opts, const std::string& line) {
  if (opts.verbosity > 0) std::fprintf(stderr, "[audioeval] %s\n", line.c_str());
}

inline bool category_selected(const RunOptions& opts, config::Category c) {
  if (opts.categories.empty()) return true;
  return std::find(opts.categories.begin(), opts.categories.end(), c) !=
         opts.categories.end();
}

// --------------------------------------------------------------------------
// Scoring
// --------------------------------------------------------------------------

inline void require_reference_kind(const metrics::MetricDescriptor& d,
                                   dataset::ReferenceKind kind,
                                   const std::string& sample_id) {
  using dataset::ReferenceKind;
  bool ok = true;
  switch (d.kind) {
    case metrics::MetricKind::kWer:
      ok = kind == ReferenceKind::kPlainText;
      break;
    case metrics::MetricKind::kWder:
    case metrics::MetricKind::kCpWer:
      ok = kind == ReferenceKind::kSpeakerTagged;
      break;
    case metrics::MetricKind::kMatchVerbatim:
    case metrics::MetricKind::kMatchFold:
      ok = kind == ReferenceKind::kPlainText || kind == ReferenceKind::kStructured;
      break;
    case metrics::MetricKind::kJudgeBinary:
    case metrics::MetricKind::kJudgeDetailed:
      ok = true;
      break;
  }
  if (!ok)
    throw ConfigSchemaError(
        "metric " + d.name,
        "requires reference kind " + std::string(d.reference_requirement) +
            ", but sample \"" + sample_id + "\" has " +
            dataset::reference_kind_name(kind));
}

// Model output under test for the text metrics: all turn outputs joined.
inline std::string hypothesis_text(const engine::RawPrediction& p) {
  std::string out;
  for (size_t i = 0; i < p.turn_outputs.size(); ++i) {
    if (i) out += "\n";
    out += p.turn_outputs[i];
  }
  return out;
}

inline std::string judge_question(const dataset::SampleRecord& s) {
  for (const auto& t : s.turns)
    if (t.role == dataset::TurnRole::kUser)
      return t.text.value_or("(audio input)");
  return "(audio input)";
}

struct JudgeJob {
  report::SampleResult* result;
  const metrics::MetricDescriptor* metric;
  std::string question;
  std::string reference;
  std::string hypothesis;
};

// Scores one task's predictions against its manifest samples. Pure metrics
// are computed inline; judge metrics run afterwards under a pool capped at
// judge_concurrency. Results come back sorted by (sample_id, model_name).
inline std::vector<report::SampleResult> score_task(
    const config::TaskSpec& task,
    const std::map<std::string, const dataset::SampleRecord*>& samples,
    const std::vector<engine::RawPrediction>& predictions) {
  std::vector<report::SampleResult> results;
  results.reserve(predictions.size());
  std::vector<JudgeJob> jobs;

  for (const auto& p : predictions) {
    auto it = samples.find(p.sample_id);
    if (it == samples.end())
      throw ConfigSchemaError("predictions",
                              "sample \"" + p.sample_id + "\" not present in " +
                                  task.dataset_path);
    const dataset::SampleRecord& sample = *it->second;

    report::SampleResult r;
    r.sample_id = p.sample_id;
    r.model_name = p.model_name;
    r.task_name = task.task_name;
    r.category = config::category_name(task.category);
    r.latency_s = p.latency_s;
    r.audio_duration_s = p.audio_duration_s;
    r.attempts = p.attempts;
    r.error = p.error;

    if (p.error) {
      for (const auto& name : task.metric_names)
        r.metric_errors[name] = "prediction error: " + *p.error;
      results.push_back(std::move(r));
      continue;
    }

    const std::string hyp = hypothesis_text(p);
    results.push_back(std::move(r));
    report::SampleResult& res = results.back();

    for (const auto& name : task.metric_names) {
      const auto* d = metrics::find_metric(name);
      require_reference_kind(*d, sample.reference.kind, sample.sample_id);
      try {
        switch (d->kind) {
          case metrics::MetricKind::kWer: {
            double v = metrics::wer(metrics::normalize_text(sample.reference.value),
                                    metrics::normalize_text(hyp));
            res.metric_values.push_back({name, v, d->scale, 1});
            break;
          }
          case metrics::MetricKind::kWder: {
            auto ref = metrics::parse_speaker_tagged(sample.reference.value);
            auto hyp_t = metrics::parse_speaker_tagged(hyp);
            res.metric_values.push_back({name, metrics::wder(ref, hyp_t).value,
                                         d->scale, 1});
            break;
          }
          case metrics::MetricKind::kCpWer: {
            auto ref = metrics::parse_speaker_tagged(sample.reference.value);
            auto hyp_t = metrics::parse_speaker_tagged(hyp);
            res.metric_values.push_back({name, metrics::cpwer(ref, hyp_t),
                                         d->scale, 1});
            break;
          }
          case metrics::MetricKind::kMatchVerbatim: {
            int m = metrics::structured_match_score(sample.reference.value, hyp,
                                                    metrics::Canonicalizer::kVerbatim);
            res.metric_values.push_back({name, 100.0 * m, d->scale, 1});
            break;
          }
          case metrics::MetricKind::kMatchFold: {
            int m = metrics::structured_match_score(
                sample.reference.value, hyp,
                metrics::Canonicalizer::kWhitespaceCaseFold);
            res.metric_values.push_back({name, 100.0 * m, d->scale, 1});
            break;
          }
          case metrics::MetricKind::kJudgeBinary:
          case metrics::MetricKind::kJudgeDetailed:
            jobs.push_back({&res, d, judge_question(sample),
                            sample.reference.value, hyp});
            break;
        }
      } catch (const MetricError& e) {
        res.metric_errors[name] = e.what();
      }
    }
  }

  if (!jobs.empty()) {
    const config::JudgeSpec& spec = *task.judge;  // validated at parse time
    scheduler::PermitPool judge_pool(spec.judge_concurrency);
    std::vector<std::thread> workers;
    std::mutex mu;
    workers.reserve(jobs.size());
    for (auto& job : jobs) {
      workers.emplace_back([&job, &spec, &judge_pool, &mu] {
        try {
          double v = judge::llm_judge_score(job.question, job.reference,
                                            job.hypothesis, spec, judge_pool);
          std::lock_guard<std::mutex> lock(mu);
          job.result->metric_values.push_back(
              {job.metric->name, v, job.metric->scale, 1});
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mu);
          job.result->metric_errors[job.metric->name] = e.what();
        }
      });
    }
    for (auto& w : workers) w.join();
    // judge completion order is nondeterministic; restore a stable order
    for (auto& r : results)
      std::sort(r.metric_values.begin(), r.metric_values.end(),
                [](const metrics::MetricValue& a, const metrics::MetricValue& b) {
                  return a.metric_name < b.metric_name;
                });
  }

  std::sort(results.begin(), results.end(),
            [](const report::SampleResult& a, const report::SampleResult& b) {
              return std::tie(a.sample_id, a.model_name) <
                     std::tie(b.sample_id, b.model_name);
            });
  return results;
}

inline void note_judge_template(report::RunReport& rep, const config::TaskSpec& task) {
  if (!task.judge) return;
  bool used = false;
  for (const auto& name : task.metric_names)
    if (metrics::find_metric(name)->needs_judge) used = true;
  if (!used) return;
  std::string mode =
      task.judge->judge_mode == config::JudgeMode::kBinary ? "binary" : "detailed";
  rep.judge_templates[mode] = judge::template_version(task.judge->judge_mode);
}

// --------------------------------------------------------------------------
// Efficiency
// --------------------------------------------------------------------------

inline report::TaskTiming task_efficiency(
    const std::string& task_name, double task_wall,
    const std::map<std::string, double>& model_walls,
    const std::vector<engine::RawPrediction>& predictions) {
  report::TaskTiming t;
  t.task_name = task_name;
  t.wall_clock_s = task_wall;
  for (const auto& [model, wall] : model_walls) {
    report::ModelEfficiency m;
    m.model_name = model;
    m.record.wall_clock_s = wall;
    for (const auto& p : predictions) {
      if (p.model_name != model || !p.ok()) continue;
      ++m.record.samples_processed;
      m.record.total_audio_s += p.audio_duration_s;
    }
    if (m.record.total_audio_s > 0) m.rtf = metrics::rtf(m.record);
    if (m.record.wall_clock_s > 0)
      m.samples_per_second = metrics::samples_per_second(m.record);
    t.per_model.push_back(std::move(m));
  }
  return t;
}

inline void write_predictions(const std::vector<engine::RawPrediction>& preds,
                              const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  for (const auto& p : preds) f << p.to_json().dump() << "\n";
  if (!f) throw IoError("short write " + path.string());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run: parse -> load -> filter -> shard -> engines -> metrics -> report
// ---------------------------------------------------------------------------

inline RunOutcome run_evaluation(const config::RunConfig& cfg,
                                 const RunOptions& opts = {}) {
  RunOutcome out;
  out.output_dir = opts.output_dir_override.value_or(cfg.output_dir);
  out.report.config_fingerprint = config::config_fingerprint(cfg);
  out.report.seed = cfg.seed;

  scheduler::PermitPool pool(cfg.global_permit_limit);
  engine::EndpointLimiters limiters = engine::make_endpoint_limiters(cfg.endpoints);

  std::vector<double> task_walls;
  bool any_task_empty_of_successes = false;

  for (const auto& task : cfg.tasks) {
    if (!detail::category_selected(opts, task.category)) continue;

    auto samples = dataset::load_manifest(task.dataset_path);
    config::FilterSpec filter;
    if (auto it = cfg.filters.find(task.task_name); it != cfg.filters.end())
      filter = it->second;
    auto filtered = dataset::apply_filters(std::move(samples), filter, cfg.seed);
    auto shards = dataset::shard_dataset(filtered, cfg.endpoints);

    detail::progress(opts, "task " + task.task_name + ": " +
                               std::to_string(filtered.size()) + " samples across " +
                               std::to_string(shards.size()) + " endpoint shard(s)");

    // One engine per non-empty shard, all engines of the task concurrent.
    // The engine's stagger index is the endpoint's position, so requests
    // across endpoints are staggered by stagger_ms.
    std::vector<engine::EngineResult> engine_results(shards.size());
    std::vector<std::thread> engine_threads;
    for (size_t i = 0; i < shards.size(); ++i) {
      if (shards[i].samples.empty()) continue;
      engine_threads.emplace_back([&, i] {
        engine::EngineRun run{task, shards[i], {cfg.endpoints[i]}};
        engine::EngineOptions eopts;
        eopts.stagger_base_ms = cfg.stagger_ms;
        eopts.endpoint_limits = &limiters;
        eopts.model_index_offset = static_cast<int>(i);
        engine_results[i] = engine::run_engine(run, pool, eopts);
      });
    }
    for (auto& t : engine_threads) t.join();

    std::vector<engine::RawPrediction> task_preds;
    double started = 0, finished = 0;
    bool have_engines = false;
    std::map<std::string, double> model_walls;
    for (size_t i = 0; i < shards.size(); ++i) {
      const auto& er = engine_results[i];
      if (er.predictions.empty() && er.finished_s == 0.0) continue;
      if (!have_engines || er.started_s < started) started = er.started_s;
      if (!have_engines || er.finished_s > finished) finished = er.finished_s;
      have_engines = true;
      model_walls[cfg.endpoints[i].name] = er.wall_s();
      task_preds.insert(task_preds.end(), er.predictions.begin(),
                        er.predictions.end());
    }
    std::sort(task_preds.begin(), task_preds.end(),
              [](const engine::RawPrediction& a, const engine::RawPrediction& b) {
                return std::tie(a.sample_id, a.model_name) <
                       std::tie(b.sample_id, b.model_name);
              });
    double task_wall = have_engines ? finished - started : 0.0;
    task_walls.push_back(task_wall);

    size_t successes = 0;
    for (const auto& p : task_preds)
      if (p.ok()) ++successes;
    if (successes == 0) any_task_empty_of_successes = true;

    detail::progress(opts, "task " + task.task_name + ": " +
                               std::to_string(successes) + "/" +
                               std::to_string(task_preds.size()) +
                               " predictions ok, wall " +
                               std::to_string(task_wall) + " s");

    // score
    std::map<std::string, const dataset::SampleRecord*> index;
    for (const auto& s : filtered) index[s.sample_id] = &s;
    auto results = detail::score_task(task, index, task_preds);
    detail::note_judge_template(out.report, task);
    out.report.per_sample.insert(out.report.per_sample.end(), results.begin(),
                                 results.end());
    out.report.timing.push_back(detail::task_efficiency(
        task.task_name, task_wall, model_walls, task_preds));
    out.predictions.insert(out.predictions.end(), task_preds.begin(),
                           task_preds.end());
  }

  if (!task_walls.empty())
    out.report.scenario = metrics::scenario_runtimes(task_walls);

  for (const auto& spec : cfg.aggregations) {
    auto entries = report::aggregate(out.report.per_sample, spec);
    out.report.aggregates.insert(out.report.aggregates.end(), entries.begin(),
                                 entries.end());
  }

  out.exit_code = any_task_empty_of_successes ? 2 : 0;

  if (opts.write_files) {
    report::write_outputs(out.report, out.output_dir);
    detail::write_predictions(out.predictions,
                              std::filesystem::path(out.output_dir) /
                                  "predictions.jsonl");
  }
  return out;
}

// ---------------------------------------------------------------------------
// score: replay metrics + report from stored predictions (no inference)
// ---------------------------------------------------------------------------

inline std::vector<engine::RawPrediction> load_predictions(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open predictions: " + path);
  std::vector<engine::RawPrediction> preds;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    try {
      preds.push_back(engine::RawPrediction::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ConfigSchemaError("predictions line " + std::to_string(line_no),
                              e.what());
    }
  }
  return preds;
}

inline RunOutcome score_predictions(const config::RunConfig& cfg,
                                    const std::string& predictions_path,
                                    const RunOptions& opts = {}) {
  RunOutcome out;
  out.output_dir = opts.output_dir_override.value_or(cfg.output_dir);
  out.report.config_fingerprint = config::config_fingerprint(cfg);
  out.report.seed = cfg.seed;
  out.predictions = load_predictions(predictions_path);

  if (out.predictions.empty()) {
    out.exit_code = 2;  // nothing to score
    return out;
  }

  std::map<std::string, std::vector<engine::RawPrediction>> by_task;
  for (auto& p : out.predictions) by_task[p.task_name].push_back(p);
  for (const auto& [task_name, preds] : by_task) {
    bool known = false;
    for (const auto& t : cfg.tasks)
      if (t.task_name == task_name) known = true;
    if (!known)
      throw ConfigSchemaError("predictions",
                              "unknown task \"" + task_name + "\"");
  }

  std::vector<double> task_walls;
  for (const auto& task : cfg.tasks) {
    auto it = by_task.find(task.task_name);
    if (it == by_task.end()) continue;
    auto& preds = it->second;
    std::sort(preds.begin(), preds.end(),
              [](const engine::RawPrediction& a, const engine::RawPrediction& b) {
                return std::tie(a.sample_id, a.model_name) <
                       std::tie(b.sample_id, b.model_name);
              });

    auto samples = dataset::load_manifest(task.dataset_path);
    config::FilterSpec filter;
    if (auto fit = cfg.filters.find(task.task_name); fit != cfg.filters.end())
      filter = fit->second;
    auto filtered = dataset::apply_filters(std::move(samples), filter, cfg.seed);
    std::map<std::string, const dataset::SampleRecord*> index;
    for (const auto& s : filtered) index[s.sample_id] = &s;

    auto results = detail::score_task(task, index, preds);
    detail::note_judge_template(out.report, task);
    out.report.per_sample.insert(out.report.per_sample.end(), results.begin(),
                                 results.end());

    // Replay timing: per-model wall approximated by summed request latencies.
    std::map<std::string, double> model_walls;
    for (const auto& p : preds) model_walls[p.model_name] += p.latency_s;
    double task_wall = 0;
    for (const auto& [m, w] : model_walls) task_wall = std::max(task_wall, w);
    task_walls.push_back(task_wall);
    out.report.timing.push_back(detail::task_efficiency(
        task.task_name, task_wall, model_walls, preds));
  }

  if (!task_walls.empty())
    out.report.scenario = metrics::scenario_runtimes(task_walls);

  for (const auto& spec : cfg.aggregations) {
    auto entries = report::aggregate(out.report.per_sample, spec);
    out.report.aggregates.insert(out.report.aggregates.end(), entries.begin(),
                                 entries.end());
  }

  if (opts.write_files) report::write_outputs(out.report, out.output_dir);
  return out;
}

}  // namespace audioeval::runner
