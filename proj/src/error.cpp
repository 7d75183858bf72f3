#include "flowgraph/error.hpp"

namespace flowgraph {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::UnknownAsset: return "UnknownAsset";
    case ErrorCode::DuplicateArc: return "DuplicateArc";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::MissingHubAnnotation: return "MissingHubAnnotation";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::MissingAngleAsset: return "MissingAngleAsset";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownVariableName: return "UnknownVariableName";
    case ErrorCode::SolverLaunchFailure: return "SolverLaunchFailure";
    case ErrorCode::NonzeroExit: return "NonzeroExit";
    case ErrorCode::ObjectiveMismatch: return "ObjectiveMismatch";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
  }
  return "Unknown";
}

}  // namespace flowgraph
