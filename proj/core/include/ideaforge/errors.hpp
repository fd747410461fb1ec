#pragma once

#include <stdexcept>
#include <string>

namespace ideaforge {

// Base class for every error thrown by the library. The CLI maps the
// concrete types onto process exit codes, so new error kinds should
// derive from one of the classes below rather than from std::exception.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent configuration, bad input schemas, refusing to
// resume into a directory produced by a different config. Exit code 2.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A pipeline stage failed after retries were exhausted. Exit code 3.
class StageError : public Error {
 public:
  explicit StageError(const std::string& what) : Error(what) {}
};

// The request budget ran out; checked before dispatch. Exit code 4.
class BudgetExhaustedError : public Error {
 public:
  explicit BudgetExhaustedError(const std::string& what) : Error(what) {}
};

// The underlying completion/embedding provider kept failing.
class ProviderError : public StageError {
 public:
  explicit ProviderError(const std::string& what) : StageError(what) {}
};

// A cache entry exists but its checksum does not match its payload.
class CacheCorruptionError : public StageError {
 public:
  explicit CacheCorruptionError(const std::string& what) : StageError(what) {}
};

// A model response could not be parsed into the expected structure,
// even after the configured number of re-asks.
class ParseError : public StageError {
 public:
  ParseError(const std::string& what, std::string field = {})
      : StageError(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace ideaforge
