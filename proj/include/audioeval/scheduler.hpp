#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include "audioeval/errors.hpp"

namespace audioeval::scheduler {

// ===========================================================================
// Permit pool
//
// A global budget of in-flight requests shared by every engine. acquire()
// blocks; waiters are served strictly FIFO via a ticket queue.
// ===========================================================================

class PermitPool;

// Move-only handle for one concurrency slot. Released on destruction or by
// an explicit release(); never released twice.
class Permit {
 public:
  Permit() = default;
  Permit(Permit&& other) noexcept { *this = std::move(other); }
  Permit& operator=(Permit&& other) noexcept {
    if (this != &other) {
      release();
      pool_ = other.pool_;
      acquired_at_ = other.acquired_at_;
      other.pool_ = nullptr;
    }
    return *this;
  }
  Permit(const Permit&) = delete;
  Permit& operator=(const Permit&) = delete;
  ~Permit() { release(); }

  inline void release();
  bool held() const { return pool_ != nullptr; }
  std::chrono::steady_clock::time_point acquired_at() const { return acquired_at_; }

 private:
  friend class PermitPool;
  explicit Permit(PermitPool* pool)
      : pool_(pool), acquired_at_(std::chrono::steady_clock::now()) {}

  PermitPool* pool_ = nullptr;
  std::chrono::steady_clock::time_point acquired_at_{};
};

class PermitPool {
 public:
  struct Stats {
    uint64_t total_acquired = 0;
    uint64_t total_released = 0;
    int high_water = 0;
  };

  explicit PermitPool(int limit) : limit_(limit) {
    if (limit < 1) throw Error("permit pool limit must be >= 1");
  }
  PermitPool(const PermitPool&) = delete;
  PermitPool& operator=(const PermitPool&) = delete;
  ~PermitPool() { close(); }

  // Blocks until a slot is free (FIFO among waiters) or the pool closes.
  Permit acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    uint64_t ticket = next_ticket_++;
    queue_.push_back(ticket);
    cv_.wait(lock, [&] {
      return closed_ || (queue_.front() == ticket && in_flight_ < limit_);
    });
    if (closed_) {
      for (auto it = queue_.begin(); it != queue_.end(); ++it)
        if (*it == ticket) {
          queue_.erase(it);
          break;
        }
      throw PoolClosedError();
    }
    queue_.pop_front();
    ++in_flight_;
    ++total_acquired_;
    if (in_flight_ > high_water_) high_water_ = in_flight_;
    cv_.notify_all();  // the new head may also be admissible
    return Permit(this);
  }

  // Wakes all waiters with PoolClosedError. Held permits stay valid and may
  // still be released.
  void close() {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

  int limit() const { return limit_; }

  int in_flight() const {
    std::lock_guard<std::mutex> lock(mu_);
    return in_flight_;
  }

  Stats stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return {total_acquired_, total_released_, high_water_};
  }

 private:
  friend class Permit;
  void release_one() {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
    ++total_released_;
    cv_.notify_all();
  }

  mutable std::mutex mu_;
  std::condition_variable cv_;
  const int limit_;
  int in_flight_ = 0;
  int high_water_ = 0;
  bool closed_ = false;
  std::deque<uint64_t> queue_;
  uint64_t next_ticket_ = 0;
  uint64_t total_acquired_ = 0;
  uint64_t total_released_ = 0;
};

inline void Permit::release() {
  if (pool_) {
    pool_->release_one();
    pool_ = nullptr;
  }
}

// ===========================================================================
// Retry execution
// ===========================================================================

struct RetryPolicy {
  int retry_limit = 0;   // additional attempts after the first
  double timeout_s = 30; // per-attempt budget
};

enum class FailureKind {
  kTimeout,
  kConnection,
  kHttpStatus,
  kDecode,
  kTemplate,
  kFormat,
  kIo,
  kOther,
};

inline const char* failure_kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::kTimeout: return "timeout";
    case FailureKind::kConnection: return "connection";
    case FailureKind::kHttpStatus: return "http_status";
    case FailureKind::kDecode: return "decode";
    case FailureKind::kTemplate: return "template";
    case FailureKind::kFormat: return "format";
    case FailureKind::kIo: return "io";
    case FailureKind::kOther: return "other";
  }
  return "?";
}

struct RequestFailure {
  FailureKind kind = FailureKind::kOther;
  std::string message;
  int http_status = 0;
  bool retryable = true;

  std::string describe() const {
    std::string out = failure_kind_name(kind);
    if (http_status != 0) out += " " + std::to_string(http_status);
    out += ": " + message;
    return out;
  }
};

// Maps a thrown error onto a failure record. Unknown exception types count
// as retryable request errors; permanent input/protocol defects do not.
inline RequestFailure classify_exception(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const TimeoutError& e) {
    return {FailureKind::kTimeout, e.what(), 0, true};
  } catch (const ConnectionError& e) {
    return {FailureKind::kConnection, e.what(), 0, true};
  } catch (const HttpStatusError& e) {
    return {FailureKind::kHttpStatus, e.what(), e.status(), e.retryable()};
  } catch (const DecodeError& e) {
    return {FailureKind::kDecode, e.what(), 0, false};
  } catch (const TemplateError& e) {
    return {FailureKind::kTemplate, e.what(), 0, false};
  } catch (const FormatError& e) {
    return {FailureKind::kFormat, e.what(), 0, false};
  } catch (const IoError& e) {
    return {FailureKind::kIo, e.what(), 0, false};
  } catch (const std::exception& e) {
    return {FailureKind::kOther, e.what(), 0, true};
  } catch (...) {
    return {FailureKind::kOther, "unknown error", 0, true};
  }
}

template <typename T>
struct Outcome {
  std::optional<T> response;
  std::optional<RequestFailure> failure;  // last error when !ok()
  int attempts = 0;

  bool ok() const { return response.has_value(); }
};

namespace detail {

template <typename T>
struct AttemptState {
  std::mutex mu;
  std::condition_variable cv;
  bool done = false;
  std::optional<T> value;
  std::exception_ptr error;
};

}  // namespace detail

// Runs `action` up to retry_limit+1 times. Each attempt holds a permit and
// is abandoned once timeout_s elapses (the permit is returned at that point,
// the runaway attempt keeps running detached and its result is discarded).
// Non-retryable failures stop the loop early; `attempts` is the count
// actually made.
//
// `capacity_limit`, when given, is the per-endpoint concurrency cap; it is
// acquired before a global permit each attempt so a capacity-blocked request
// never sits on global budget.
template <typename Fn,
          typename T = std::invoke_result_t<Fn&>>
Outcome<T> execute_with_retry(Fn&& action, const RetryPolicy& policy,
                              PermitPool& pool,
                              PermitPool* capacity_limit = nullptr) {
  auto shared_action = std::make_shared<std::decay_t<Fn>>(std::forward<Fn>(action));
  Outcome<T> out;
  const int max_attempts = policy.retry_limit + 1;
  const auto timeout = std::chrono::duration<double>(policy.timeout_s);

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    Permit capacity_slot;
    if (capacity_limit) capacity_slot = capacity_limit->acquire();
    Permit permit = pool.acquire();  // PoolClosedError propagates
    ++out.attempts;

    auto state = std::make_shared<detail::AttemptState<T>>();
    std::thread([state, shared_action] {
      try {
        T value = (*shared_action)();
        std::lock_guard<std::mutex> lock(state->mu);
        state->value = std::move(value);
        state->done = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(state->mu);
        state->error = std::current_exception();
        state->done = true;
      }
      state->cv.notify_all();
    }).detach();

    bool finished;
    {
      std::unique_lock<std::mutex> lock(state->mu);
      finished = state->cv.wait_for(lock, timeout, [&] { return state->done; });
    }
    permit.release();  // failed attempts must not hoard capacity
    capacity_slot.release();

    if (!finished) {
      out.failure = {FailureKind::kTimeout,
                     "attempt exceeded " + std::to_string(policy.timeout_s) + " s",
                     0, true};
      continue;
    }
    std::lock_guard<std::mutex> lock(state->mu);
    if (state->value) {
      out.response = std::move(state->value);
      out.failure.reset();
      return out;
    }
    out.failure = classify_exception(state->error);
    if (!out.failure->retryable) break;
  }
  return out;
}

// ===========================================================================
// Stagger plan
// ===========================================================================

// Layered dispatch delay: the i-th model of an engine waits i * base before
// each request slot; base 0 disables staggering.
struct StaggerPlan {
  int base_delay_ms = 0;
  int model_index = 0;
};

inline std::chrono::milliseconds stagger_delay(const StaggerPlan& plan) {
  return std::chrono::milliseconds(
      static_cast<long long>(plan.base_delay_ms) * plan.model_index);
}

inline void apply_stagger(const StaggerPlan& plan) {
  auto d = stagger_delay(plan);
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

}  // namespace audioeval::scheduler
