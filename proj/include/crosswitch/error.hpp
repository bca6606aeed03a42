#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crosswitch {

enum class ErrorCode {
  InvalidField,
  DegenerateInput,
  EvaluationOutsideDomain,
  DegenerateTangency,
  TooManyTangencies,
  NotTransverse,
  NotTransient,
  EtaUndefined,
  LeftDomain,
  StepLimit,
  InvalidSigns,
  PredictionMismatch,
  ParseError,
  InvalidNumerics,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every recoverable failure carries a code so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace crosswitch
