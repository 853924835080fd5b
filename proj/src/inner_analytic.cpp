#include "dirichlet/inner_analytic.hpp"

#include <algorithm>
#include <cmath>

#include "dirichlet/error.hpp"

namespace dirichlet {

using cplx = std::complex<double>;

InnerAnalyticFunction::InnerAnalyticFunction(TaylorCoefficients coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.c.size() == 0) coeffs_.c = Eigen::VectorXcd::Zero(1);
}

cplx InnerAnalyticFunction::operator()(cplx z) const {
  if (!(std::abs(z) < 1.0))
    throw Error(ErrorCode::OutsideOpenDisk, "|z| = " + std::to_string(std::abs(z)) + " is not inside the unit disk");
  const Eigen::VectorXcd& c = coeffs_.c;
  cplx acc = c(c.size() - 1);
  for (Eigen::Index k = c.size() - 2; k >= 0; --k) acc = acc * z + c(k);
  return acc;
}

InnerAnalyticFunction InnerAnalyticFunction::proper_part() const {
  TaylorCoefficients out = coeffs_;
  out.c(0) = 0.0;
  return InnerAnalyticFunction(std::move(out));
}

cplx evaluate(const InnerAnalyticFunction& w, cplx z) { return w(z); }

// Componentwise so that derivative and primitive are exact inverses.
InnerAnalyticFunction angular_derivative(const InnerAnalyticFunction& w) {
  Eigen::VectorXcd c = w.c();
  c(0) = 0.0;
  for (Eigen::Index k = 1; k < c.size(); ++k) {
    const double kk = static_cast<double>(k);
    c(k) = cplx(-kk * c(k).imag(), kk * c(k).real());
  }
  return InnerAnalyticFunction(std::move(c));
}

InnerAnalyticFunction angular_primitive(const InnerAnalyticFunction& w) {
  Eigen::VectorXcd c = w.c();
  c(0) = 0.0;
  for (Eigen::Index k = 1; k < c.size(); ++k) {
    const double kk = static_cast<double>(k);
    c(k) = cplx(c(k).imag() / kk, -c(k).real() / kk);
  }
  return InnerAnalyticFunction(std::move(c));
}

InnerAnalyticFunction chain_member(const InnerAnalyticFunction& w, ChainIndex index) {
  InnerAnalyticFunction out = w.proper_part();
  for (int i = 0; i < index.level; ++i) out = angular_derivative(out);
  for (int i = 0; i > index.level; --i) out = angular_primitive(out);
  return out;
}

std::vector<double> default_radial_schedule() {
  std::vector<double> out;
  for (int m = 4; m <= 14; ++m) out.push_back(1.0 - std::ldexp(1.0, -m));
  return out;
}

namespace {

// Radii at which the truncated series still represents the full function:
// the dropped tail, bounded by max_{k > K/2} |c_k| e^{-K(1-rho)} / (1-rho),
// stays below 1e-8 of the largest coefficient.
std::vector<double> resolved_radii(const InnerAnalyticFunction& w, std::span<const double> schedule) {
  const Eigen::VectorXcd& c = w.c();
  const Eigen::Index n = c.size();
  const double top = c.cwiseAbs().maxCoeff();
  const Eigen::Index half = n / 2;
  const double tail = c.tail(n - half).cwiseAbs().maxCoeff();
  const double harmonics = static_cast<double>(w.harmonics());
  // Short series carry no tail to estimate from; they are taken as exact polynomials.
  if (w.harmonics() < 16) return {schedule.begin(), schedule.end()};
  std::vector<double> out;
  for (double rho : schedule) {
    const double bound = tail * std::exp(-harmonics * (1.0 - rho)) / (1.0 - rho);
    if (bound <= 1e-8 * top) out.push_back(rho);
  }
  return out;
}

void check_schedule(std::span<const double> schedule) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] >= 0.0 && schedule[i] < 1.0) || (i > 0 && !(schedule[i] > schedule[i - 1])))
      throw Error(ErrorCode::BadParams, "radial schedule must be strictly increasing inside [0, 1)");
  }
}

void check_growth(const std::vector<cplx>& values, double theta) {
  const std::size_t n = values.size();
  if (n < 3) return;
  bool growing = std::abs(values.front()) > 0.0;
  for (std::size_t i = 1; i < n && growing; ++i) growing = std::abs(values[i]) > std::abs(values[i - 1]);
  if (growing && std::abs(values.back()) > 10.0 * std::abs(values.front()))
    throw Error(ErrorCode::DivergentLimit, "|w| grows without bound towards angle " + std::to_string(theta));
}

void check_drift(const std::vector<cplx>& values, double theta) {
  const std::size_t n = values.size();
  if (n < 4) return;
  double scale = 1.0;
  for (const cplx& v : values) scale = std::max(scale, std::abs(v.real()));
  const double d0 = values[n - 3].real() - values[n - 4].real();
  const double d1 = values[n - 2].real() - values[n - 3].real();
  const double d2 = values[n - 1].real() - values[n - 2].real();
  const bool same_sign = (d0 > 0 && d1 > 0 && d2 > 0) || (d0 < 0 && d1 < 0 && d2 < 0);
  if (same_sign && std::abs(d0) > 1e-10 * scale && std::abs(d1) >= 0.9 * std::abs(d0) &&
      std::abs(d2) >= 0.9 * std::abs(d1))
    throw Error(ErrorCode::DivergentLimit, "Re w does not settle towards angle " + std::to_string(theta));
}

double aitken(double x0, double x1, double x2) {
  const double d1 = x2 - x1;
  const double denom = d1 - (x1 - x0);
  if (denom == 0.0 || !std::isfinite(denom)) return x2;
  return x2 - d1 * d1 / denom;
}

RadialLimit accelerate(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::Inconclusive, "too few resolved radii for a radial limit; increase K");
  const double last = aitken(x[n - 3], x[n - 2], x[n - 1]);
  const double previous = n >= 4 ? aitken(x[n - 4], x[n - 3], x[n - 2]) : x[n - 1];
  return {last, std::abs(last - previous)};
}

std::vector<cplx> values_on(const InnerAnalyticFunction& w, double theta, std::span<const double> radii) {
  std::vector<cplx> out;
  out.reserve(radii.size());
  for (double rho : radii) out.push_back(w(std::polar(rho, theta)));
  return out;
}

}  // namespace

RadialLimit radial_limit(const InnerAnalyticFunction& w, double theta, std::span<const double> schedule) {
  check_schedule(schedule);
  const auto values = values_on(w, theta, schedule);
  check_growth(values, theta);
  check_drift(values, theta);
  std::vector<double> x;
  for (const cplx& v : values) x.push_back(v.real());
  return accelerate(x);
}

RadialLimit radial_limit(const InnerAnalyticFunction& w, double theta) {
  const auto schedule = default_radial_schedule();
  const auto values = values_on(w, theta, schedule);
  check_growth(values, theta);
  const auto radii = resolved_radii(w, schedule);
  const std::vector<cplx> resolved(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(radii.size()));
  check_drift(resolved, theta);
  std::vector<double> x;
  for (const cplx& v : resolved) x.push_back(v.real());
  return accelerate(x);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Soft: return "soft";
    case Verdict::BorderlineHard: return "borderline-hard";
    case Verdict::Hard: return "hard";
  }
  return "?";
}

const char* to_string(Confidence c) { return c == Confidence::Certain ? "certain" : "numerical"; }

namespace {

enum class Trend { Converges, Diverges, Unclear };

// Median ratio of successive increments of w(rho e^{i theta}) on the last radii.
Trend probe(const InnerAnalyticFunction& w, double theta, std::span<const double> radii) {
  const auto values = values_on(w, theta, radii);
  const std::size_t n = values.size();
  double scale = w.c().cwiseAbs().maxCoeff();
  for (const cplx& v : values) scale = std::max(scale, std::abs(v));
  std::vector<double> steps;
  for (std::size_t i = n - 4; i + 1 < n; ++i) steps.push_back(std::abs(values[i + 1] - values[i]));
  if (*std::max_element(steps.begin() + 1, steps.end()) <= 1e-13 * std::max(scale, 1e-300))
    return Trend::Converges;
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i)
    ratios.push_back(steps[i] > 0.0 ? steps[i + 1] / steps[i] : std::numeric_limits<double>::infinity());
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[1];
  if (median <= 0.8) return Trend::Converges;
  if (median >= 0.92) return Trend::Diverges;
  return Trend::Unclear;
}

}  // namespace

SingularityVerdict classify(const InnerAnalyticFunction& w, double theta) {
  const auto schedule = default_radial_schedule();
  auto trend = [&](const InnerAnalyticFunction& member) {
    const auto radii = resolved_radii(member, schedule);
    if (radii.size() < 5) return Trend::Unclear;
    return probe(member, theta, radii);
  };
  if (resolved_radii(w, schedule).size() < 5)
    throw Error(ErrorCode::Inconclusive,
                "K = " + std::to_string(w.harmonics()) + " is too small to classify a boundary point");

  constexpr int kMaxPrimitives = 6;
  for (int m = 0; m <= kMaxPrimitives; ++m) {
    const Trend t = trend(chain_member(w, ChainIndex{-m}));
    if (t == Trend::Unclear)
      throw Error(ErrorCode::Inconclusive, "radial behaviour after " + std::to_string(m) +
                                               " primitives is ambiguous at angle " + std::to_string(theta));
    if (t == Trend::Diverges) continue;

    SingularityVerdict out;
    out.position = theta;
    out.confidence = Confidence::Numerical;
    if (m == 0) {
      out.verdict = Verdict::Soft;
      for (int d = 1; d <= 3; ++d) {
        const Trend td = trend(chain_member(w, ChainIndex{d}));
        if (td == Trend::Diverges) {
          out.degree = d;
          break;
        }
        if (td == Trend::Unclear) break;
      }
    } else if (m == 1) {
      out.verdict = Verdict::BorderlineHard;
      out.degree = 0;
    } else {
      out.verdict = Verdict::Hard;
      out.degree = m - 1;
    }
    return out;
  }
  throw Error(ErrorCode::Inconclusive,
              "no radial limit after " + std::to_string(kMaxPrimitives) + " primitives at angle " + std::to_string(theta));
}

}  // namespace dirichlet
