#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dirichlet/solver.hpp"
#include "dirichlet/spectral.hpp"

namespace dirichlet {

/// (1/2pi) int f(t) (1 - rho^2) / (1 - 2 rho cos(theta - t) + rho^2) dt, split
/// at the annotated points of f and at t = theta.
double poisson_oracle(const BoundaryFunction& f, double rho, double theta, const QuadratureConfig& config = {});

using ScalarField = std::function<double(std::complex<double>)>;
using Region = std::function<bool(std::complex<double>)>;

/// Five-point Laplacian (u(x+h,y) + u(x-h,y) + u(x,y+h) + u(x,y-h) - 4u) / h^2.
/// When `inside` is given, OutsideDomain unless the circle of radius 2h
/// around p lies inside (checked at 16 points).
double laplacian_residual(const ScalarField& u, std::complex<double> p, double h, const Region& inside = {});
double laplacian_residual(const DiskSolution& s, std::complex<double> p, double h);
double laplacian_residual(const CurveSolution& s, std::complex<double> p, double h);

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
  bool same_sign = true;
};

/// Extremes of d theta / d lambda over the arc-length interval
/// [left, right] (reference and exclusion unused). IntervalContainsCorner if
/// the interval meets the image of a corner prevertex.
BoundPair sectional_bound_check(const BoundaryCorrespondence& corr, const SectionalInterval& interval);

struct ReportOptions {
  std::uint64_t seed = 20240611;
  int harmonicity_points = 100;
  double step = 1e-3;
  /// Harmonicity points are drawn from |z| <= radius (preimages on curves).
  double harmonicity_radius = 0.5;
  int oracle_points = 25;
  int boundary_angles = 64;
  int product_angles = 32;
  /// Harmonics of the companion solve used for radial limits.
  int companion_harmonics = 1 << 18;
  double annotation_exclusion = 0.05;
  double corner_exclusion = 0.1;
  /// Boundary tolerance floor: 1e-6 on the disk, 1e-4 on curves by default.
  std::optional<double> boundary_tolerance;
};

struct VerificationReport {
  struct Harmonicity {
    bool ran = false, passed = false;
    int points = 0;
    double max_residual = 0.0, max_residual_half = 0.0, h_ratio = 0.0;
    /// Scale of u: the larger of max |u| at the samples and max |f| at the
    /// boundary test angles (the maximum principle bounds u by the data).
    double max_abs_u = 0.0;
    bool ratio_at_rounding = false;
  } harmonicity;
  struct MeanValue {
    bool ran = false, passed = false;
    double abs_error = 0.0;
  } mean_value;
  struct Boundary {
    bool ran = false, passed = false;
    int tested = 0;
    double max_error = 0.0, tolerance = 0.0, excluded_measure = 0.0;
    std::vector<std::pair<double, double>> excluded_arcs;
    std::string note;
  } boundary;
  struct Oracle {
    bool ran = false, passed = false;
    int points = 0;
    double max_deviation = 0.0;
  } oracle;
  struct ProductIdentity {
    bool ran = false, passed = false;
    int angles = 0;
    double max_deviation = 0.0;
  } product_identity;
  std::uint64_t seed = 0;
  std::string subject;

  bool passed() const;
};

VerificationReport full_report(const DiskSolution& s, const ReportOptions& options = {});
VerificationReport full_report(const CurveSolution& s, const ReportOptions& options = {});

std::string render_text(const VerificationReport& r);
/// One "key=value" line per entry, in a fixed order.
std::string render_key_values(const VerificationReport& r);

}  // namespace dirichlet
