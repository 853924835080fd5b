#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dirichlet/boundary.hpp"
#include "dirichlet/conformal.hpp"
#include "dirichlet/inner_analytic.hpp"
#include "dirichlet/quadrature.hpp"

namespace dirichlet {

struct SolverOptions {
  int harmonics = 256;
  QuadratureConfig quadrature;
  int correspondence_grid = 4096;
};

enum class CheckStatus { Pass, Fail, Unknown };
const char* to_string(CheckStatus s);

struct ConditionCheck {
  std::string condition;  // integrability, hard-count, hardness-degrees, corner-divergence, w-orientation
  std::string theorem;    // T1 .. T6
  CheckStatus status = CheckStatus::Unknown;
  std::string detail;
};

struct ConditionReport {
  std::string theorem;
  int pipeline_depth = 0;
  std::vector<ConditionCheck> checks;

  bool ok() const;
  /// "condition: detail" for every failed check, separated by "; ".
  std::string failures() const;
};

/// Checks the existence conditions that annotations and corner data decide.
/// T1/T2: disk with integrable / locally integrable data; T3/T5: curve with
/// a zero-free derivative; T4/T6: curve with corners. When the map has
/// corners the correspondence locates them on the curve (computed if absent).
ConditionReport validate(const BoundaryFunction& f, const ConformalMap* map = nullptr,
                         const BoundaryCorrespondence* corr = nullptr);

struct SolveMeta {
  int harmonics = 0;
  double rel_tol = 0.0;
  int pipeline_depth = 0;
  std::string theorem;
};

struct DiskSolution {
  InnerAnalyticFunction w;
  BoundaryFunction boundary;
  SolveMeta meta;
  ConditionReport conditions;
};

struct CurveSolution {
  DiskSolution disk;
  ConformalMap map;
  BoundaryCorrespondence correspondence;
  BoundaryFunction boundary;  // f_b over arc length
  std::vector<std::complex<double>> outline;  // image of the unit circle, for inside tests

  bool inside(std::complex<double> p) const;
};

/// Fourier-Taylor construction, through piecewise primitives when f is not
/// integrable. Throws ValidationFailed when a condition fails.
DiskSolution solve_disk(const BoundaryFunction& f, const SolverOptions& options = {});

/// f_a(theta) = f_b(g(theta)) on the circle with annotations carried through
/// g^-1 (corners added as soft points), solved on the disk.
CurveSolution solve_curve(const BoundaryFunction& f_b, const ConformalMap& map, const SolverOptions& options = {});

/// Boundary data on the circle induced by data over arc length.
BoundaryFunction pullback(const BoundaryFunction& f_b, const BoundaryCorrespondence& corr);

/// u at (x, y). OutsideDomain outside the open disk / curve interior.
double evaluate_solution(const DiskSolution& s, std::complex<double> p);
double evaluate_solution(const CurveSolution& s, std::complex<double> p);

}  // namespace dirichlet
