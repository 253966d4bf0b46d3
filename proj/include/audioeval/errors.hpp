#pragma once

#include <stdexcept>
#include <string>

namespace audioeval {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

// Document is not parseable at all (bad YAML/JSON).
class ConfigSyntaxError : public Error {
 public:
  using Error::Error;
};

// Structurally wrong document: missing/extra/ill-typed field. `path()` names
// the offending location, e.g. "endpoints[0].capacity".
class ConfigSchemaError : public Error {
 public:
  ConfigSchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Well-typed but violates a domain invariant (capacity 0, min > max, ...).
class ConfigInvariantError : public Error {
 public:
  ConfigInvariantError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed manifest line; message always starts with "line <n>: ".
class ManifestError : public Error {
 public:
  ManifestError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class DuplicateIdError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Scheduler / client
// ---------------------------------------------------------------------------

class PoolClosedError : public Error {
 public:
  PoolClosedError() : Error("permit pool closed") {}
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

class ConnectionError : public Error {
 public:
  using Error::Error;
};

class HttpStatusError : public Error {
 public:
  HttpStatusError(int status, bool retryable, const std::string& what)
      : Error("http status " + std::to_string(status) + ": " + what),
        status_(status),
        retryable_(retryable) {}
  int status() const { return status_; }
  bool retryable() const { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

// 2xx response whose body does not match the chat-completions shape.
class DecodeError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

// WAV file with the wrong sample rate / width / channel count.
class FormatError : public Error {
 public:
  using Error::Error;
};

class BindError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

class MetricError : public Error {
 public:
  using Error::Error;
};

class EmptyReferenceError : public MetricError {
 public:
  EmptyReferenceError() : MetricError("empty reference") {}
};

class NoAlignedPairsError : public MetricError {
 public:
  NoAlignedPairsError() : MetricError("no aligned word pairs") {}
};

class ZeroAudioError : public MetricError {
 public:
  ZeroAudioError() : MetricError("total audio duration is zero") {}
};

class ZeroWallClockError : public MetricError {
 public:
  ZeroWallClockError() : MetricError("wall clock duration is zero") {}
};

class EmptyListError : public MetricError {
 public:
  EmptyListError() : MetricError("empty runtime list") {}
};

class JudgeParseError : public MetricError {
 public:
  using MetricError::MetricError;
};

}  // namespace audioeval
