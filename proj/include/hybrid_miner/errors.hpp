#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hybrid_miner {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable event data: bad XES/CSV/JSON content, traces
// without proper ▷/□ endpoints.
class LogError : public Error {
 public:
  using Error::Error;
};

// Structural misuse of a net: unknown transitions, firing a disabled
// transition, inconsistent markings.
class ModelError : public Error {
 public:
  using Error::Error;
};

struct FieldError {
  std::string field;
  std::string message;
};

// Invalid parameter values. Carries one entry per offending field so the
// service can answer with machine-readable 422 bodies.
class ParameterError : public Error {
 public:
  explicit ParameterError(std::vector<FieldError> errors)
      : Error(summarize(errors)), errors_(std::move(errors)) {}

  ParameterError(std::string field, std::string message)
      : ParameterError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  static std::string summarize(const std::vector<FieldError>& errors) {
    std::string out = "invalid parameters:";
    for (const auto& e : errors) out += " " + e.field + " (" + e.message + ")";
    return out;
  }

  std::vector<FieldError> errors_;
};

}  // namespace hybrid_miner
