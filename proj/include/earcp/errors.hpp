#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace earcp {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes disagree: expert count, prediction dimension, column count.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A documented precondition was violated (off-simplex weights, NaN, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A hyperparameter or option lies outside its admissible range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// update() was called for a step with no pending prediction record.
class FeedbackError : public Error {
 public:
  using Error::Error;
};

// An operation was invoked in a mode that does not support it.
class ModeError : public Error {
 public:
  using Error::Error;
};

// Snapshot could not be decoded or has an unsupported schema version.
class PersistenceError : public Error {
 public:
  using Error::Error;
};

// Malformed ingestion CSV; carries the 1-based line number.
class IngestError : public Error {
 public:
  IngestError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Experiment configuration failed validation. Every problem found is kept,
// each prefixed with its location.
class ConfigParseError : public Error {
 public:
  explicit ConfigParseError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += '\n';
      out += issue;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace earcp
