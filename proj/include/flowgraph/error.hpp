#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowgraph {

enum class ErrorCode {
  DuplicateId,
  InvariantViolation,
  UnknownAsset,
  DuplicateArc,
  SelfLoop,
  MissingHubAnnotation,
  UnsupportedCombination,
  MissingAngleAsset,
  IoFailure,
  ParseError,
  UnknownVariableName,
  SolverLaunchFailure,
  NonzeroExit,
  ObjectiveMismatch,
  SolverFailure,
  EmptySample,
  DegenerateVariance,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported as an Error carrying
/// a code that callers (and the CLI exit-code mapping) can branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flowgraph
