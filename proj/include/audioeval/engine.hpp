#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "audioeval/client.hpp"
#include "audioeval/config.hpp"
#include "audioeval/dataset.hpp"
#include "audioeval/scheduler.hpp"
#include "audioeval/util.hpp"

namespace audioeval::engine {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Raw predictions
// ---------------------------------------------------------------------------

struct RawPrediction {
  std::string sample_id;
  std::string model_name;
  std::string task_name;
  std::vector<std::string> turn_outputs;  // one per completed user turn
  double latency_s = 0.0;                 // summed response latencies
  int attempts = 0;                       // summed over turns
  double audio_duration_s = 0.0;
  std::optional<std::string> error;       // set => prediction is errored

  bool ok() const { return !error.has_value(); }

  json to_json() const {
    json j = {{"sample_id", sample_id},
              {"model_name", model_name},
              {"task_name", task_name},
              {"turn_outputs", turn_outputs},
              {"latency_s", latency_s},
              {"attempts", attempts},
              {"audio_duration_s", audio_duration_s}};
    if (error) j["error"] = *error;
    return j;
  }

  static RawPrediction from_json(const json& j) {
    RawPrediction p;
    p.sample_id = j.at("sample_id").get<std::string>();
    p.model_name = j.at("model_name").get<std::string>();
    p.task_name = j.at("task_name").get<std::string>();
    p.turn_outputs = j.at("turn_outputs").get<std::vector<std::string>>();
    p.latency_s = j.at("latency_s").get<double>();
    p.attempts = j.at("attempts").get<int>();
    p.audio_duration_s = j.at("audio_duration_s").get<double>();
    if (j.contains("error")) p.error = j["error"].get<std::string>();
    return p;
  }
};

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

// One engine binds a dataset shard to one or more models and drives every
// (sample, model) pair to completion.
struct EngineRun {
  config::TaskSpec task;
  dataset::Shard shard;
  std::vector<config::EndpointSpec> models;
};

// Per-endpoint capacity limiters, shared across engines of a run so the
// effective concurrency for an endpoint is min(global pool, capacity).
using EndpointLimiters = std::map<std::string, std::shared_ptr<scheduler::PermitPool>>;

inline EndpointLimiters make_endpoint_limiters(
    const std::vector<config::EndpointSpec>& endpoints) {
  EndpointLimiters limits;
  for (const auto& e : endpoints)
    limits[e.name] = std::make_shared<scheduler::PermitPool>(e.capacity);
  return limits;
}

struct EngineOptions {
  int stagger_base_ms = 0;
  // Added to each model's position when computing its stagger index, so a
  // caller running several single-model engines can stagger across them.
  int model_index_offset = 0;
  const EndpointLimiters* endpoint_limits = nullptr;
};

struct EngineResult {
  std::vector<RawPrediction> predictions;
  double started_s = 0.0;   // monotonic
  double finished_s = 0.0;
  double wall_s() const { return finished_s - started_s; }
};

namespace detail {

struct TurnExchange {
  client::ChatMessage user_message;
  client::ChatResponse response;
};

inline std::map<std::string, std::string> sample_vocab(
    const dataset::SampleRecord& sample, const dataset::Turn& turn) {
  std::map<std::string, std::string> vocab = sample.metadata;
  vocab["sample_id"] = sample.sample_id;  // reserved names win over metadata
  vocab["text"] = turn.text.value_or("");
  return vocab;
}

}  // namespace detail

// Drives one sample against one model. User turns go out strictly in order;
// each response is appended to the conversation before the next turn. Each
// turn consumes its own permit(s); the stagger delay applies once per
// request slot, never to retries.
inline RawPrediction run_multi_turn(const dataset::SampleRecord& sample,
                                    const config::EndpointSpec& model,
                                    int model_index,
                                    const config::TaskSpec& task,
                                    scheduler::PermitPool& pool,
                                    const EngineOptions& opts = {}) {
  RawPrediction pred;
  pred.sample_id = sample.sample_id;
  pred.model_name = model.name;
  pred.task_name = task.task_name;
  pred.audio_duration_s = sample.audio_duration_s;

  const config::EffectiveSettings settings =
      config::resolve_effective_settings(task, model);
  const scheduler::RetryPolicy policy{settings.retry_limit, settings.timeout_s};
  scheduler::PermitPool* capacity = nullptr;
  if (opts.endpoint_limits) {
    auto it = opts.endpoint_limits->find(model.name);
    if (it != opts.endpoint_limits->end()) capacity = it->second.get();
  }
  const std::string tmpl =
      task.prompt_template.empty() ? "{text}" : task.prompt_template;

  std::vector<client::ChatMessage> history;
  size_t user_turn_no = 0;
  for (const auto& turn : sample.turns) {
    if (turn.role != dataset::TurnRole::kUser) continue;  // reference turns
    ++user_turn_no;

    scheduler::apply_stagger({opts.stagger_base_ms, model_index});

    // Captured by value: an abandoned (timed-out) attempt may still be
    // running after this frame moves on, so it must own everything it reads.
    auto action = [sample, turn, model, settings, tmpl, history]() {
      client::ChatMessage user;
      user.role = "user";
      user.parts.push_back(client::ContentPart::make_text(
          client::render_template(tmpl, detail::sample_vocab(sample, turn))));
      if (turn.audio_index) {
        auto audio_parts = client::encode_audio_part(
            sample.audio[static_cast<size_t>(*turn.audio_index)].path,
            settings.audio_chunk_s);
        user.parts.insert(user.parts.end(), audio_parts.begin(), audio_parts.end());
      }
      std::vector<client::ChatMessage> messages = history;
      messages.push_back(user);
      json body = client::build_request(messages, settings, model.model_id);
      detail::TurnExchange ex;
      ex.response = client::send_request(model, body, settings.timeout_s);
      ex.user_message = std::move(user);
      return ex;
    };

    auto outcome = scheduler::execute_with_retry(action, policy, pool, capacity);
    pred.attempts += outcome.attempts;
    if (!outcome.ok()) {
      pred.error = "turn " + std::to_string(user_turn_no) + " failed after " +
                   std::to_string(outcome.attempts) +
                   " attempt(s): " + outcome.failure->describe();
      break;  // remaining turns are never sent
    }
    pred.latency_s += outcome.response->response.latency_s;
    pred.turn_outputs.push_back(outcome.response->response.text);
    history.push_back(std::move(outcome.response->user_message));
    history.push_back(client::ChatMessage::text_message(
        "assistant", outcome.response->response.text));
  }
  return pred;
}

// Runs every (sample, model) pair of the engine concurrently under the
// shared pool. Failures are recorded per prediction, never fatal. Output is
// sorted by (sample_id, model_name) regardless of completion order.
inline EngineResult run_engine(const EngineRun& run, scheduler::PermitPool& pool,
                               const EngineOptions& opts = {}) {
  EngineResult result;
  result.started_s = util::monotonic_s();

  std::mutex sink_mu;
  std::vector<std::thread> workers;
  workers.reserve(run.shard.samples.size() * run.models.size());
  for (size_t mi = 0; mi < run.models.size(); ++mi) {
    for (const auto& sample : run.shard.samples) {
      workers.emplace_back([&, mi] {
        RawPrediction p;
        try {
          p = run_multi_turn(sample, run.models[mi],
                             static_cast<int>(mi) + opts.model_index_offset,
                             run.task, pool, opts);
        } catch (const std::exception& e) {
          p.sample_id = sample.sample_id;
          p.model_name = run.models[mi].name;
          p.task_name = run.task.task_name;
          p.audio_duration_s = sample.audio_duration_s;
          p.attempts = std::max(p.attempts, 1);
          p.error = e.what();
        }
        std::lock_guard<std::mutex> lock(sink_mu);
        result.predictions.push_back(std::move(p));
      });
    }
  }
  for (auto& w : workers) w.join();

  std::sort(result.predictions.begin(), result.predictions.end(),
            [](const RawPrediction& a, const RawPrediction& b) {
              return std::tie(a.sample_id, a.model_name) <
                     std::tie(b.sample_id, b.model_name);
            });
  result.finished_s = util::monotonic_s();
  return result;
}

}  // namespace audioeval::engine
