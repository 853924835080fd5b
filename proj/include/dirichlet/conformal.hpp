#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dirichlet {

/// Conformal map gamma from the closed unit disk onto a simple closed curve
/// and its interior, with the boundary angles where gamma' vanishes or blows up.
class ConformalMap {
 public:
  using Analytic = std::function<std::complex<double>(std::complex<double>)>;

  ConformalMap(Analytic forward, Analytic derivative, std::vector<double> corner_prevertices,
               std::string label);

  std::complex<double> forward(std::complex<double> z) const { return (*forward_)(z); }
  std::complex<double> derivative(std::complex<double> z) const { return (*derivative_)(z); }
  std::span<const double> corner_prevertices() const noexcept { return corners_; }
  bool has_corners() const noexcept { return !corners_.empty(); }
  const std::string& label() const noexcept { return label_; }

  /// Table point whose image is closest to `target`; starting guess for inverse().
  std::complex<double> nearest_table_point(std::complex<double> target) const;

 private:
  struct Sample {
    std::complex<double> z;
    std::complex<double> image;
  };
  std::shared_ptr<const Analytic> forward_;
  std::shared_ptr<const Analytic> derivative_;
  std::vector<double> corners_;
  std::string label_;
  std::shared_ptr<const std::vector<Sample>> table_;
};

ConformalMap map_identity();
/// e^{i phi} (z - a) / (1 - conj(a) z); BadParameter unless |a| < 1.
ConformalMap map_mobius(std::complex<double> a, double phi);
/// z - z^2 / 2; cusp at the image of z = 1.
ConformalMap map_cardioid();
/// z + eps z^2; BadParameter unless |eps| < 1/2.
ConformalMap map_perturbed(double eps);

/// Damped Newton iteration for forward(z) = target, kept in the closed disk.
/// Converges to |forward(z) - target| <= 1e-12 (1e-8 next to a corner
/// prevertex); throws NoConvergence after 100 iterations.
std::complex<double> inverse(const ConformalMap& map, std::complex<double> target,
                             std::optional<std::complex<double>> guess = std::nullopt);

/// Arc length lambda = g(theta) = int_0^theta |gamma'(e^{it})| dt along the
/// image curve, anchored at g(0) = 0 (the image of z = 1), as a monotone
/// piecewise cubic through exact node values and slopes.
class BoundaryCorrespondence {
 public:
  /// Node angles (0 .. 2 pi inclusive), arc lengths and exact slopes; slopes
  /// are limited per cell (Fritsch-Carlson) so the interpolant is monotone.
  BoundaryCorrespondence(std::vector<double> theta, std::vector<double> lambda, std::vector<double> slope,
                         std::vector<double> corners, std::string anchor);

  const std::vector<double>& theta_grid() const noexcept { return theta_; }
  const std::vector<double>& lambda_grid() const noexcept { return lambda_; }
  double total_length() const noexcept { return lambda_.back(); }
  std::span<const double> corner_angles() const noexcept { return corners_; }
  const std::string& anchor() const noexcept { return anchor_; }

  /// theta in [0, 2 pi) (canonicalized) to lambda in [0, L).
  double g(double theta) const;
  /// lambda in [0, L) (canonicalized) to theta in [0, 2 pi).
  double g_inverse(double lambda) const;
  /// Slope of the interpolant, d lambda / d theta.
  double slope(double theta) const;
  /// Circular distance from theta to the nearest corner prevertex (infinity if none).
  double distance_to_corner(double theta) const;

 private:
  double value_in_cell(std::size_t cell, double theta) const;
  std::vector<double> theta_;
  std::vector<double> lambda_;
  std::vector<double> left_slope_;   // per cell, at theta_[j]
  std::vector<double> right_slope_;  // per cell, at theta_[j + 1]
  std::vector<double> corners_;
  std::string anchor_;
};

BoundaryCorrespondence correspondence(const ConformalMap& map, int grid = 4096);

/// |d theta / d lambda| * |d lambda / d theta| by central differences on g
/// and its inverse. TooCloseToCorner within 1e-6 of a corner prevertex.
double derivative_product_check(const BoundaryCorrespondence& corr, double theta);

}  // namespace dirichlet
