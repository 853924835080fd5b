#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dirichlet/boundary.hpp"
#include "dirichlet/quadrature.hpp"

namespace dirichlet {

/// Real Fourier coefficients of a function on the unit circle; `alpha(k-1)`
/// and `beta(k-1)` hold the k-th cosine and sine coefficients.
struct FourierCoefficients {
  double alpha0 = 0.0;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;

  int harmonics() const noexcept { return static_cast<int>(alpha.size()); }
};

/// Complex Taylor coefficients c_0 .. c_K of an inner analytic function.
struct TaylorCoefficients {
  Eigen::VectorXcd c;

  int harmonics() const noexcept { return static_cast<int>(c.size()) - 1; }
};

/// Section [left, right] of the circle (right may exceed the period when the
/// section wraps) with the base point of its primitive and the half-width
/// kept clear around the adjacent singular points.
struct SectionalInterval {
  double left = 0.0;
  double right = 0.0;
  double reference = 0.0;
  double exclusion = 0.0;
};

/// alpha_0 = (1/pi) int f, alpha_k = (1/pi) int f cos(k t), beta_k = (1/pi) int f sin(k t).
///
/// Composite 15-point Gauss-Legendre panels on a uniform grid of P >= K
/// panels (summed for all k at once with one FFT per node position); panels
/// touching an annotated point are split there and refined adaptively, with
/// graded meshes towards integrable divergences. P doubles until the
/// coefficients agree to rel_tol times (1/pi) int |f|.
FourierCoefficients compute_fourier(const BoundaryFunction& f, int harmonics,
                                    const QuadratureConfig& config = {});

/// c_0 = alpha_0 / 2, c_k = alpha_k - i beta_k.
TaylorCoefficients to_taylor(const FourierCoefficients& fourier);

/// Sectional primitive of f: on each section F(t) = C + int_{reference}^{t} f,
/// with constants reconciled by continuity across non-singular section
/// boundaries. Hard annotations drop one degree of hardness.
BoundaryFunction piecewise_primitive(const BoundaryFunction& f,
                                     std::span<const SectionalInterval> intervals,
                                     const QuadratureConfig& config = {});

/// One section between each pair of consecutive non-integrable points (or a
/// single section [0, period] with reference 0 when there are none).
std::vector<SectionalInterval> default_sections(const BoundaryFunction& f,
                                                double exclusion_fraction = 1e-6);

/// Taylor coefficients of a function that is locally integrable almost
/// everywhere: N piecewise primitives, Fourier analysis of the integrable
/// result, then N angular derivatives in coefficient space. Reduces to
/// to_taylor(compute_fourier(f)) when f is integrable.
TaylorCoefficients nonintegrable_taylor(const BoundaryFunction& f, int harmonics,
                                        const QuadratureConfig& config = {});

}  // namespace dirichlet
