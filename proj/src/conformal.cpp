#include "dirichlet/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dirichlet/boundary.hpp"
#include "dirichlet/error.hpp"
#include "dirichlet/quadrature.hpp"

namespace dirichlet {

using cplx = std::complex<double>;

ConformalMap::ConformalMap(Analytic forward, Analytic derivative, std::vector<double> corner_prevertices,
                           std::string label)
    : forward_(std::make_shared<const Analytic>(std::move(forward))),
      derivative_(std::make_shared<const Analytic>(std::move(derivative))),
      corners_(std::move(corner_prevertices)),
      label_(std::move(label)) {
  for (double& c : corners_) {
    c = std::fmod(c, kTwoPi);
    if (c < 0) c += kTwoPi;
  }
  std::sort(corners_.begin(), corners_.end());

  auto table = std::make_shared<std::vector<Sample>>();
  table->push_back({0.0, (*forward_)(0.0)});
  for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0}) {
    for (int j = 0; j < 64; ++j) {
      const cplx z = std::polar(r, kTwoPi * j / 64.0);
      table->push_back({z, (*forward_)(z)});
    }
  }
  table_ = std::move(table);
}

cplx ConformalMap::nearest_table_point(cplx target) const {
  const Sample* best = &table_->front();
  for (const Sample& s : *table_)
    if (std::abs(s.image - target) < std::abs(best->image - target)) best = &s;
  return best->z;
}

ConformalMap map_identity() {
  return {[](cplx z) { return z; }, [](cplx) { return cplx(1.0); }, {}, "identity"};
}

ConformalMap map_mobius(cplx a, double phi) {
  if (!(std::abs(a) < 1.0) || !std::isfinite(phi))
    throw Error(ErrorCode::BadParameter, "Mobius map needs |a| < 1 and a finite rotation");
  const cplx rot = std::polar(1.0, phi);
  const cplx ac = std::conj(a);
  const double scale = 1.0 - std::norm(a);
  return {[=](cplx z) { return rot * (z - a) / (1.0 - ac * z); },
          [=](cplx z) {
            const cplx d = 1.0 - ac * z;
            return rot * scale / (d * d);
          },
          {},
          "mobius(a=" + std::to_string(a.real()) + (a.imag() < 0 ? "" : "+") + std::to_string(a.imag()) +
              "i, phi=" + std::to_string(phi) + ")"};
}

ConformalMap map_cardioid() {
  return {[](cplx z) { return z - 0.5 * z * z; }, [](cplx z) { return 1.0 - z; }, {0.0}, "cardioid"};
}

ConformalMap map_perturbed(double eps) {
  if (!(std::abs(eps) < 0.5)) throw Error(ErrorCode::BadParameter, "perturbed map needs |eps| < 1/2");
  return {[eps](cplx z) { return z + eps * z * z; }, [eps](cplx z) { return 1.0 + 2.0 * eps * z; }, {},
          "perturbed(eps=" + std::to_string(eps) + ")"};
}

namespace {

cplx into_disk(cplx z) {
  const double r = std::abs(z);
  return r > 1.0 ? z / r : z;
}

bool near_corner(const ConformalMap& map, cplx z) {
  for (double c : map.corner_prevertices())
    if (std::abs(z - std::polar(1.0, c)) <= 1e-3) return true;
  return false;
}

}  // namespace

cplx inverse(const ConformalMap& map, cplx target, std::optional<cplx> guess) {
  constexpr double kTol = 1e-12;
  constexpr double kCornerTol = 1e-8;
  cplx z = into_disk(guess ? *guess : map.nearest_table_point(target));
  double residual = std::abs(map.forward(z) - target);

  for (int it = 0; it < 100; ++it) {
    if (residual <= kTol) {
      // A few undamped steps push the residual to rounding level.
      for (int polish = 0; polish < 3; ++polish) {
        const cplx d = map.derivative(z);
        if (d == 0.0 || !std::isfinite(std::abs(d))) break;
        const cplx zn = into_disk(z - (map.forward(z) - target) / d);
        const double rn = std::abs(map.forward(zn) - target);
        if (!(rn < residual)) break;
        z = zn;
        residual = rn;
      }
      return z;
    }
    const cplx d = map.derivative(z);
    if (d == 0.0 || !std::isfinite(std::abs(d))) break;
    const cplx step = (map.forward(z) - target) / d;
    bool moved = false;
    for (double damping = 1.0; damping > 1e-12; damping *= 0.5) {
      const cplx zn = into_disk(z - damping * step);
      const double rn = std::abs(map.forward(zn) - target);
      if (rn < residual) {
        z = zn;
        residual = rn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (residual <= kCornerTol && near_corner(map, z)) return z;
  throw Error(ErrorCode::NoConvergence,
              "inverse of " + map.label() + " did not converge at (" + std::to_string(target.real()) + ", " +
                  std::to_string(target.imag()) + "); residual " + std::to_string(residual));
}

BoundaryCorrespondence::BoundaryCorrespondence(std::vector<double> theta, std::vector<double> lambda,
                                               std::vector<double> slope, std::vector<double> corners,
                                               std::string anchor)
    : theta_(std::move(theta)), lambda_(std::move(lambda)), corners_(std::move(corners)), anchor_(std::move(anchor)) {
  const std::size_t cells = theta_.size() - 1;
  left_slope_.resize(cells);
  right_slope_.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double secant = (lambda_[j + 1] - lambda_[j]) / (theta_[j + 1] - theta_[j]);
    auto clamp = [&](double m) { return std::isfinite(m) ? std::clamp(m, 0.0, 3.0 * secant) : 3.0 * secant; };
    double a = clamp(slope[j]);
    double b = clamp(slope[j + 1]);
    if (secant > 0.0) {
      const double r = std::hypot(a / secant, b / secant);
      if (r > 3.0) {
        a *= 3.0 / r;
        b *= 3.0 / r;
      }
    }
    left_slope_[j] = a;
    right_slope_[j] = b;
  }
}

double BoundaryCorrespondence::value_in_cell(std::size_t j, double theta) const {
  const double h = theta_[j + 1] - theta_[j];
  const double t = (theta - theta_[j]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * lambda_[j] + (t3 - 2 * t2 + t) * h * left_slope_[j] +
         (-2 * t3 + 3 * t2) * lambda_[j + 1] + (t3 - t2) * h * right_slope_[j];
}

double BoundaryCorrespondence::g(double theta) const {
  double c = std::fmod(theta, kTwoPi);
  if (c < 0) c += kTwoPi;
  const auto it = std::upper_bound(theta_.begin(), theta_.end(), c);
  const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - theta_.begin()) - 1, theta_.size() - 2);
  return value_in_cell(j, c);
}

double BoundaryCorrespondence::slope(double theta) const {
  double c = std::fmod(theta, kTwoPi);
  if (c < 0) c += kTwoPi;
  const auto it = std::upper_bound(theta_.begin(), theta_.end(), c);
  const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - theta_.begin()) - 1, theta_.size() - 2);
  const double h = theta_[j + 1] - theta_[j];
  const double t = (c - theta_[j]) / h;
  return ((6 * t * t - 6 * t) * lambda_[j] + (3 * t * t - 4 * t + 1) * h * left_slope_[j] +
          (-6 * t * t + 6 * t) * lambda_[j + 1] + (3 * t * t - 2 * t) * h * right_slope_[j]) /
         h;
}

double BoundaryCorrespondence::g_inverse(double lambda) const {
  const double length = total_length();
  double c = std::fmod(lambda, length);
  if (c < 0) c += length;
  const auto it = std::upper_bound(lambda_.begin(), lambda_.end(), c);
  const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - lambda_.begin()) - 1, lambda_.size() - 2);
  // Safeguarded Newton on the monotone cubic of cell j.
  double lo = theta_[j], hi = theta_[j + 1];
  double x = lo + (hi - lo) * (c - lambda_[j]) / (lambda_[j + 1] - lambda_[j]);
  if (!std::isfinite(x)) x = 0.5 * (lo + hi);
  for (int it2 = 0; it2 < 100; ++it2) {
    const double f = value_in_cell(j, x) - c;
    if (f == 0.0) break;
    if (f > 0) hi = x; else lo = x;
    const double d = slope(x);
    double next = d > 0.0 ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2e-16 * std::max(1.0, std::abs(x)) || hi - lo <= 4e-16 * std::max(1.0, hi)) {
      x = next;
      break;
    }
    x = next;
  }
  return x >= kTwoPi ? x - kTwoPi : x;
}

double BoundaryCorrespondence::distance_to_corner(double theta) const {
  double best = std::numeric_limits<double>::infinity();
  for (double c : corners_) {
    double d = std::fmod(std::abs(theta - c), kTwoPi);
    best = std::min(best, std::min(d, kTwoPi - d));
  }
  return best;
}

BoundaryCorrespondence correspondence(const ConformalMap& map, int grid) {
  if (grid < 64) throw Error(ErrorCode::BadParameter, "correspondence grid must have at least 64 cells");
  const double h = kTwoPi / grid;
  std::vector<double> nodes;
  for (int j = 0; j <= grid; ++j) nodes.push_back(h * j);
  std::vector<double> corners(map.corner_prevertices().begin(), map.corner_prevertices().end());
  for (double c : corners) {
    for (double shift : {0.0, kTwoPi}) {
      const double x = c + shift;
      if (x > kTwoPi) continue;
      nodes.push_back(x);
      for (double d = 0.5 * h; d > 1e-12; d *= 0.5) {
        if (x - d >= 0.0) nodes.push_back(x - d);
        if (x + d <= kTwoPi) nodes.push_back(x + d);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
              nodes.end());
  nodes.front() = 0.0;
  nodes.back() = kTwoPi;

  auto is_corner = [&](double x) {
    for (double c : corners)
      if (std::abs(x - c) <= 1e-14 || std::abs(x - c - kTwoPi) <= 1e-14) return true;
    return false;
  };
  auto speed = [&map](double t) { return std::abs(map.derivative(std::polar(1.0, t))); };

  QuadratureConfig cfg;
  cfg.rel_tol = 1e-13;
  cfg.max_depth = 50;
  std::vector<double> lambda{0.0};
  std::vector<double> slope{speed(0.0)};
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const Segment seg{nodes[j], nodes[j + 1], is_corner(nodes[j]), is_corner(nodes[j + 1])};
    lambda.push_back(lambda.back() + integrate(speed, seg, cfg));
    slope.push_back(speed(nodes[j + 1]));
  }
  const cplx origin = map.forward(1.0);
  return {std::move(nodes), std::move(lambda), std::move(slope), std::move(corners),
          "arc length measured counterclockwise from gamma(1) = (" + std::to_string(origin.real()) + ", " +
              std::to_string(origin.imag()) + ")"};
}

double derivative_product_check(const BoundaryCorrespondence& corr, double theta) {
  const double dist = corr.distance_to_corner(theta);
  if (dist < 1e-6)
    throw Error(ErrorCode::TooCloseToCorner, "angle " + std::to_string(theta) + " is within 1e-6 of a corner");
  const double length = corr.total_length();
  // Unwrapped evaluations so central differences straddle the anchor.
  auto g = [&](double t) { return corr.g(t) + length * std::floor(t / kTwoPi); };
  auto ginv = [&](double l) { return corr.g_inverse(l) + kTwoPi * std::floor(l / length); };

  // Fourth-order central differences.
  auto diff = [](auto&& f, double x, double h) {
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
  };
  const double step = std::min(1e-4, 0.2 * dist);
  const double dl_dt = diff(g, theta, step);
  const double dt_dl = diff(ginv, g(theta), step * dl_dt);
  return std::abs(dt_dl) * std::abs(dl_dt);
}

}  // namespace dirichlet
