#include "dirichlet/error.hpp"

namespace dirichlet {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EvalAtSingularity: return "EvalAtSingularity";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ExpressionSyntax: return "ExpressionSyntax";
    case ErrorCode::NotIntegrable: return "NotIntegrable";
    case ErrorCode::NotLocallyIntegrable: return "NotLocallyIntegrable";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::IntervalContainsNonIntegrableSingularity:
      return "IntervalContainsNonIntegrableSingularity";
    case ErrorCode::OutsideOpenDisk: return "OutsideOpenDisk";
    case ErrorCode::DivergentLimit: return "DivergentLimit";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ParameterSolveFailure: return "ParameterSolveFailure";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::TooCloseToCorner: return "TooCloseToCorner";
    case ErrorCode::IntervalContainsCorner: return "IntervalContainsCorner";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::ScenarioError: return "ScenarioError";
  }
  return "Unknown";
}

}  // namespace dirichlet
