#pragma once

#include <stdexcept>
#include <string>

namespace dirichlet {

enum class ErrorCode {
  EvalAtSingularity,
  UnknownBuiltin,
  BadParams,
  ExpressionSyntax,
  NotIntegrable,
  NotLocallyIntegrable,
  QuadratureFailure,
  IntervalContainsNonIntegrableSingularity,
  OutsideOpenDisk,
  DivergentLimit,
  Inconclusive,
  BadParameter,
  NoConvergence,
  ParameterSolveFailure,
  InvalidPolygon,
  TooCloseToCorner,
  IntervalContainsCorner,
  ValidationFailed,
  OutsideDomain,
  ScenarioError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map error families to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dirichlet
