#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "dirichlet/spectral.hpp"

namespace dirichlet {

/// Truncated Taylor series w(z) = sum_{k=0}^{K} c_k z^k on the open unit disk.
class InnerAnalyticFunction {
 public:
  explicit InnerAnalyticFunction(TaylorCoefficients coeffs);
  explicit InnerAnalyticFunction(Eigen::VectorXcd c) : InnerAnalyticFunction(TaylorCoefficients{std::move(c)}) {}

  const TaylorCoefficients& coefficients() const noexcept { return coeffs_; }
  const Eigen::VectorXcd& c() const noexcept { return coeffs_.c; }
  int harmonics() const noexcept { return coeffs_.harmonics(); }
  /// c_0 == 0.
  bool proper() const noexcept { return coeffs_.c(0) == std::complex<double>(0.0, 0.0); }

  /// Horner evaluation; throws OutsideOpenDisk for |z| >= 1.
  std::complex<double> operator()(std::complex<double> z) const;

  /// The same series with c_0 removed.
  InnerAnalyticFunction proper_part() const;

 private:
  TaylorCoefficients coeffs_;
};

std::complex<double> evaluate(const InnerAnalyticFunction& w, std::complex<double> z);

/// i z dw/dz: c_k -> i k c_k, c_0 -> 0.
InnerAnalyticFunction angular_derivative(const InnerAnalyticFunction& w);
/// Inverse of the angular derivative on proper functions: c_k -> c_k / (i k), c_0 -> 0.
InnerAnalyticFunction angular_primitive(const InnerAnalyticFunction& w);

struct ChainIndex {
  int level = 0;  // > 0: angular derivatives, < 0: angular primitives
};

InnerAnalyticFunction chain_member(const InnerAnalyticFunction& w, ChainIndex index);

struct RadialLimit {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// rho_m = 1 - 2^-m for m = 4..14.
std::vector<double> default_radial_schedule();

/// Limit of Re w(rho e^{i theta}) as rho -> 1 from Aitken's delta-squared
/// transform of the values on the schedule. The error estimate is the change
/// between the last two accelerated values. Throws DivergentLimit when the
/// values run away and Inconclusive when fewer than three radii are usable.
RadialLimit radial_limit(const InnerAnalyticFunction& w, double theta, std::span<const double> schedule);

/// Default schedule, restricted to radii where the dropped tail, bounded by
/// max_{k > K/2} |c_k| e^{-K (1 - rho)} / (1 - rho), is below 1e-8 of the
/// largest coefficient. Series with K < 16 count as exact polynomials.
/// Divergence is still judged on the full schedule.
RadialLimit radial_limit(const InnerAnalyticFunction& w, double theta);

enum class Verdict { Soft, BorderlineHard, Hard };
enum class Confidence { Certain, Numerical };

const char* to_string(Verdict v);
const char* to_string(Confidence c);

struct SingularityVerdict {
  double position = 0.0;
  Verdict verdict = Verdict::Soft;
  /// Hardness degree for hard and borderline-hard points; softness degree
  /// (1..3) for soft points, empty when no probed derivative diverged.
  std::optional<int> degree;
  Confidence confidence = Confidence::Numerical;
};

/// Smallest number m of angular primitives after which w has a radial limit
/// at theta: m = 0 soft, m = 1 borderline-hard, m >= 2 hard of degree m - 1.
/// Throws Inconclusive when the truncated series cannot separate the cases.
SingularityVerdict classify(const InnerAnalyticFunction& w, double theta);

}  // namespace dirichlet
