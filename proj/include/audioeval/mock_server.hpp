#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "audioeval/errors.hpp"
#include "audioeval/util.hpp"

namespace audioeval::mock {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Behavior script
// ---------------------------------------------------------------------------

struct MockBehavior {
  double latency_min_s = 0.0;  // equal min/max means constant latency
  double latency_max_s = 0.0;
  int fail_first_n = 0;        // per sample key: first n requests get a 500
  double fail_prob = 0.0;      // seeded random failures on top
  long long seed = 0;
  std::map<std::string, std::string> response_script;  // key -> reply text
  std::vector<std::string> fail_keys;  // these keys always get a 500

  static MockBehavior from_json(const json& j) {
    if (!j.is_object()) throw ConfigSchemaError("behavior", "expected a mapping");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k != "latency_s" && k != "fail_first_n" && k != "fail_prob" &&
          k != "seed" && k != "response_script" && k != "fail_keys")
        throw ConfigSchemaError("behavior", "unknown key \"" + k + "\"");
    }
    MockBehavior b;
    if (auto it = j.find("latency_s"); it != j.end()) {
      if (it->is_number()) {
        b.latency_min_s = b.latency_max_s = it->get<double>();
      } else if (it->is_object() && it->contains("min") && it->contains("max")) {
        b.latency_min_s = (*it)["min"].get<double>();
        b.latency_max_s = (*it)["max"].get<double>();
      } else {
        throw ConfigSchemaError("behavior.latency_s",
                                "expected a number or {min, max}");
      }
      if (b.latency_min_s < 0 || b.latency_max_s < b.latency_min_s)
        throw ConfigInvariantError("behavior.latency_s", "need 0 <= min <= max");
    }
    if (auto it = j.find("fail_first_n"); it != j.end()) {
      b.fail_first_n = it->get<int>();
      if (b.fail_first_n < 0)
        throw ConfigInvariantError("behavior.fail_first_n", "must be >= 0");
    }
    if (auto it = j.find("fail_prob"); it != j.end()) {
      b.fail_prob = it->get<double>();
      if (b.fail_prob < 0.0 || b.fail_prob > 1.0)
        throw ConfigInvariantError("behavior.fail_prob", "must be in [0, 1]");
    }
    if (auto it = j.find("seed"); it != j.end()) b.seed = it->get<long long>();
    if (auto it = j.find("response_script"); it != j.end()) {
      if (!it->is_object())
        throw ConfigSchemaError("behavior.response_script", "expected a mapping");
      for (auto kv = it->begin(); kv != it->end(); ++kv)
        b.response_script[kv.key()] = kv.value().get<std::string>();
    }
    if (auto it = j.find("fail_keys"); it != j.end()) {
      if (!it->is_array())
        throw ConfigSchemaError("behavior.fail_keys", "expected a list");
      for (const auto& k : *it) b.fail_keys.push_back(k.get<std::string>());
    }
    return b;
  }
};

// ---------------------------------------------------------------------------
// Stats
// ---------------------------------------------------------------------------

struct RequestLogEntry {
  double arrival_s = 0.0;  // relative to server start
  int messages = 0;
  std::string sample_key;
  int audio_parts = 0;
  long long audio_bytes = 0;  // decoded payload size estimate
};

struct MockStats {
  uint64_t requests_received = 0;
  int max_concurrent_observed = 0;
  std::vector<RequestLogEntry> per_request_log;

  json to_json() const {
    json log = json::array();
    for (const auto& e : per_request_log)
      log.push_back({{"arrival_s", e.arrival_s},
                     {"messages", e.messages},
                     {"sample_key", e.sample_key},
                     {"audio_parts", e.audio_parts},
                     {"audio_bytes", e.audio_bytes}});
    return {{"requests_received", requests_received},
            {"max_concurrent_observed", max_concurrent_observed},
            {"per_request_log", log}};
  }

  static MockStats from_json(const json& j) {
    MockStats s;
    s.requests_received = j.at("requests_received").get<uint64_t>();
    s.max_concurrent_observed = j.at("max_concurrent_observed").get<int>();
    for (const auto& e : j.at("per_request_log")) {
      RequestLogEntry entry;
      entry.arrival_s = e.at("arrival_s").get<double>();
      entry.messages = e.at("messages").get<int>();
      entry.sample_key = e.at("sample_key").get<std::string>();
      entry.audio_parts = e.at("audio_parts").get<int>();
      entry.audio_bytes = e.at("audio_bytes").get<long long>();
      s.per_request_log.push_back(std::move(entry));
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// Server
// ---------------------------------------------------------------------------

// Chat-completions mock: echoes (or scripts) replies, sleeps configured
// latency per request, injects failures, and tracks exact concurrency stats.
// Latency sleeps run on per-request pool threads so they never block other
// connections. Also serves GET /stats and POST /reset.
class MockServer {
 public:
  // port 0 picks a free port. Throws BindError when binding fails.
  explicit MockServer(MockBehavior behavior, int port = 0)
      : behavior_(std::move(behavior)), rng_(static_cast<uint64_t>(behavior_.seed)) {
    srv_.new_task_queue = [] { return new httplib::ThreadPool(64); };

    srv_.Post("/chat/completions",
              [this](const httplib::Request& req, httplib::Response& res) {
                handle_chat(req, res);
              });
    srv_.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(stats().to_json().dump(), "application/json");
    });
    srv_.Post("/reset", [this](const httplib::Request&, httplib::Response& res) {
      reset();
      res.set_content("{}", "application/json");
    });

    if (port == 0) {
      port_ = srv_.bind_to_any_port("127.0.0.1");
      if (port_ <= 0) throw BindError("cannot bind mock server to any port");
    } else {
      if (!srv_.bind_to_port("127.0.0.1", port))
        throw BindError("cannot bind mock server to port " + std::to_string(port));
      port_ = port;
    }
    start_ = std::chrono::steady_clock::now();
    thread_ = std::thread([this] { srv_.listen_after_bind(); });
    srv_.wait_until_ready();
  }

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  ~MockServer() { stop(); }

  void stop() {
    if (thread_.joinable()) {
      srv_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  MockStats stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return stats_;
  }

  void reset() {
    std::lock_guard<std::mutex> lock(mu_);
    stats_ = {};
    fail_seen_.clear();
    rng_ = util::SplitMix64(static_cast<uint64_t>(behavior_.seed));
    concurrent_ = 0;
  }

 private:
  struct ConcurrencyGuard {
    MockServer* s;
    explicit ConcurrencyGuard(MockServer* srv) : s(srv) {
      int cur = ++s->concurrent_;
      int prev = s->peak_.load();
      while (cur > prev && !s->peak_.compare_exchange_weak(prev, cur)) {
      }
    }
    ~ConcurrencyGuard() { --s->concurrent_; }
  };

  static std::string extract_sid(const std::string& text) {
    auto pos = text.find("[sid:");
    if (pos == std::string::npos) return text;
    auto end = text.find(']', pos);
    if (end == std::string::npos) return text;
    return text.substr(pos + 5, end - pos - 5);
  }

  void handle_chat(const httplib::Request& req, httplib::Response& res) {
    ConcurrencyGuard guard(this);

    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error&) {
      res.status = 400;
      res.set_content(R"({"error":{"message":"invalid JSON"}})", "application/json");
      return;
    }
    int messages = 0;
    std::string last_user_text;
    int audio_parts = 0;
    long long audio_bytes = 0;
    if (body.contains("messages") && body["messages"].is_array()) {
      messages = static_cast<int>(body["messages"].size());
      for (const auto& m : body["messages"]) {
        if (m.value("role", "") != "user") continue;
        std::string text;
        int parts = 0;
        long long bytes = 0;
        const auto& content = m["content"];
        if (content.is_string()) {
          text = content.get<std::string>();
        } else if (content.is_array()) {
          for (const auto& p : content) {
            std::string type = p.value("type", "");
            if (type == "text") {
              if (!text.empty()) text += " ";
              text += p.value("text", "");
            } else if (type == "input_audio") {
              ++parts;
              if (p.contains("input_audio"))
                bytes += static_cast<long long>(
                             p["input_audio"].value("data", "").size()) *
                         3 / 4;
            }
          }
        }
        last_user_text = text;
        audio_parts = parts;
        audio_bytes = bytes;
      }
    }
    std::string key = extract_sid(last_user_text);

    bool fail = false;
    double latency;
    uint64_t req_id;
    {
      std::lock_guard<std::mutex> lock(mu_);
      req_id = ++stats_.requests_received;
      stats_.max_concurrent_observed =
          std::max(stats_.max_concurrent_observed, peak_.load());
      stats_.per_request_log.push_back(
          {std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
               .count(),
           messages, key, audio_parts, audio_bytes});
      if (std::find(behavior_.fail_keys.begin(), behavior_.fail_keys.end(), key) !=
          behavior_.fail_keys.end()) {
        fail = true;
      } else if (fail_seen_[key] < behavior_.fail_first_n) {
        ++fail_seen_[key];
        fail = true;
      } else if (behavior_.fail_prob > 0 && rng_.uniform() < behavior_.fail_prob) {
        fail = true;
      }
      latency = behavior_.latency_max_s > behavior_.latency_min_s
                    ? behavior_.latency_min_s +
                          rng_.uniform() *
                              (behavior_.latency_max_s - behavior_.latency_min_s)
                    : behavior_.latency_min_s;
    }

    if (latency > 0)
      std::this_thread::sleep_for(std::chrono::duration<double>(latency));

    // Track the high-water mark once more after the sleep window so
    // overlapping handlers are fully accounted.
    {
      std::lock_guard<std::mutex> lock(mu_);
      stats_.max_concurrent_observed =
          std::max(stats_.max_concurrent_observed, peak_.load());
    }

    if (fail) {
      res.status = 500;
      res.set_content(R"({"error":{"message":"injected failure"}})",
                      "application/json");
      return;
    }

    std::string reply;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = behavior_.response_script.find(key);
      reply = it != behavior_.response_script.end() ? it->second : last_user_text;
    }
    json out = {
        {"id", "mock-" + std::to_string(req_id)},
        {"object", "chat.completion"},
        {"model", body.value("model", "mock")},
        {"choices",
         json::array({{{"index", 0},
                       {"message", {{"role", "assistant"}, {"content", reply}}},
                       {"finish_reason", "stop"}}})},
        {"usage", {{"total_tokens", static_cast<long long>(reply.size() / 4 + 1)}}}};
    res.set_content(out.dump(), "application/json");
  }

  MockBehavior behavior_;
  httplib::Server srv_;
  std::thread thread_;
  int port_ = 0;
  std::chrono::steady_clock::time_point start_;

  mutable std::mutex mu_;
  MockStats stats_;
  std::map<std::string, int> fail_seen_;
  util::SplitMix64 rng_;
  std::atomic<int> concurrent_{0};
  std::atomic<int> peak_{0};
};

// ---------------------------------------------------------------------------
// Multi-turn context check
// ---------------------------------------------------------------------------

struct TurnCheckResult {
  bool pass = true;
  std::string first_mismatch;
};

// Groups the request log by sample key (arrival order preserved) and checks
// every chain saw exactly the expected message-count sequence, e.g. {1,3,5}.
inline TurnCheckResult scripted_turn_check(const MockStats& stats,
                                           const std::vector<int>& expected) {
  std::map<std::string, std::vector<int>> chains;
  std::vector<std::string> order;
  for (const auto& e : stats.per_request_log) {
    if (!chains.count(e.sample_key)) order.push_back(e.sample_key);
    chains[e.sample_key].push_back(e.messages);
  }
  for (const auto& key : order) {
    const auto& got = chains[key];
    if (got != expected) {
      auto fmt = [](const std::vector<int>& v) {
        std::string s = "[";
        for (size_t i = 0; i < v.size(); ++i)
          s += (i ? "," : "") + std::to_string(v[i]);
        return s + "]";
      };
      return {false, "chain \"" + key + "\": expected " + fmt(expected) +
                         ", got " + fmt(got)};
    }
  }
  return {};
}

}  // namespace audioeval::mock
