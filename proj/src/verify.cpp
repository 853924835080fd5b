#include "dirichlet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "dirichlet/error.hpp"

namespace dirichlet {

using cplx = std::complex<double>;

double poisson_oracle(const BoundaryFunction& f, double rho, double theta, const QuadratureConfig& config) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorCode::OutsideOpenDisk, "Poisson integral needs 0 <= rho < 1");
  if (std::abs(f.period() - kTwoPi) > 1e-12 * kTwoPi)
    throw Error(ErrorCode::BadParams, "Poisson integral needs a function on the unit circle");
  if (!f.integrable()) throw Error(ErrorCode::NotIntegrable, f.description() + " is not integrable");

  struct Cut {
    double t;
    bool singular;
  };
  std::vector<Cut> cuts{{theta, false}, {theta + kTwoPi, false}};
  for (const auto& s : f.singularities()) {
    for (double shift : {-kTwoPi, 0.0, kTwoPi, 2 * kTwoPi}) {
      const double x = s.position + shift;
      if (std::abs(x - theta) <= f.coincidence_tolerance()) {
        cuts.front().singular = cuts.front().singular || s.diverges;
      } else if (std::abs(x - theta - kTwoPi) <= f.coincidence_tolerance()) {
        cuts.back().singular = cuts.back().singular || s.diverges;
      } else if (x > theta && x < theta + kTwoPi) {
        cuts.push_back({x, s.diverges});
      }
    }
  }
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.t < b.t; });

  const double num = 1.0 - rho * rho;
  auto kernel = [&](double t) { return f.raw(t) * num / (1.0 - 2.0 * rho * std::cos(theta - t) + rho * rho); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    sum += integrate(kernel, Segment{cuts[i].t, cuts[i + 1].t, cuts[i].singular, cuts[i + 1].singular}, config);
  return sum / kTwoPi;
}

double laplacian_residual(const ScalarField& u, cplx p, double h, const Region& inside) {
  if (!(h > 0.0)) throw Error(ErrorCode::BadParams, "finite-difference step must be positive");
  if (inside) {
    for (int j = 0; j < 16; ++j)
      if (!inside(p + std::polar(2.0 * h, kTwoPi * j / 16.0)))
        throw Error(ErrorCode::OutsideDomain, "stencil around (" + std::to_string(p.real()) + ", " +
                                                  std::to_string(p.imag()) + ") leaves the domain");
  }
  const double centre = u(p);
  return (u(p + h) + u(p - h) + u(p + cplx(0, h)) + u(p - cplx(0, h)) - 4.0 * centre) / (h * h);
}

double laplacian_residual(const DiskSolution& s, cplx p, double h) {
  return laplacian_residual([&](cplx z) { return evaluate_solution(s, z); }, p, h,
                            [](cplx z) { return std::abs(z) < 1.0; });
}

double laplacian_residual(const CurveSolution& s, cplx p, double h) {
  return laplacian_residual([&](cplx z) { return evaluate_solution(s, z); }, p, h,
                            [&](cplx z) { return s.inside(z); });
}

BoundPair sectional_bound_check(const BoundaryCorrespondence& corr, const SectionalInterval& interval) {
  const double length = corr.total_length();
  if (!(interval.right > interval.left) || interval.right - interval.left > length)
    throw Error(ErrorCode::BadParams, "malformed arc-length interval");
  for (double c : corr.corner_angles()) {
    const double lc = corr.g(c);
    for (double shift : {-length, 0.0, length, 2 * length}) {
      const double x = lc + shift;
      if (x >= interval.left && x <= interval.right)
        throw Error(ErrorCode::IntervalContainsCorner, "interval [" + std::to_string(interval.left) + ", " +
                                                           std::to_string(interval.right) + "] contains a corner");
    }
  }
  auto rate = [&](double theta) { return 1.0 / corr.slope(theta); };
  const double a = corr.g_inverse(interval.left);
  double b = corr.g_inverse(interval.right);
  if (b <= a) b += kTwoPi;
  BoundPair out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), true};
  auto take = [&](double theta) {
    const double v = rate(theta);
    out.lower = std::min(out.lower, v);
    out.upper = std::max(out.upper, v);
  };
  take(a);
  take(b);
  for (double node : corr.theta_grid()) {
    for (double shift : {0.0, kTwoPi}) {
      const double x = node + shift;
      if (x > a && x < b) take(x);
    }
  }
  out.same_sign = std::isfinite(out.lower) && std::isfinite(out.upper) &&
                  ((out.lower > 0.0 && out.upper > 0.0) || (out.lower < 0.0 && out.upper < 0.0));
  return out;
}

bool VerificationReport::passed() const {
  auto ok = [](bool ran, bool passed) { return !ran || passed; };
  return ok(harmonicity.ran, harmonicity.passed) && ok(mean_value.ran, mean_value.passed) &&
         ok(boundary.ran, boundary.passed) && ok(oracle.ran, oracle.passed) &&
         ok(product_identity.ran, product_identity.passed);
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double data_scale(const BoundaryFunction& f, int angles) {
  double m = 0.0;
  for (int j = 0; j < angles; ++j) {
    const double v = std::abs(f.raw(kTwoPi * (j + 0.5) / angles));
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return m;
}

void harmonicity(VerificationReport& r, const std::vector<cplx>& points, const ScalarField& u, const Region& inside,
                 double h, double data) {
  auto& out = r.harmonicity;
  out.ran = true;
  out.points = static_cast<int>(points.size());
  double sampled = 0.0;
  for (const cplx& p : points) {
    sampled = std::max(sampled, std::abs(u(p)));
    out.max_residual = std::max(out.max_residual, std::abs(laplacian_residual(u, p, h, inside)));
    out.max_residual_half = std::max(out.max_residual_half, std::abs(laplacian_residual(u, p, h / 2, inside)));
  }
  out.max_abs_u = std::max(sampled, data);
  const double scale = std::max(out.max_abs_u, std::numeric_limits<double>::min());
  out.h_ratio = out.max_residual_half > 0.0 ? out.max_residual / out.max_residual_half
                                            : std::numeric_limits<double>::infinity();
  // Stencil rounding error grows like eps |u| / h^2; below it the ratio is noise.
  out.ratio_at_rounding =
      out.max_residual_half <= 1e3 * kEps * std::max(sampled, std::numeric_limits<double>::min()) / (0.25 * h * h);
  out.passed = out.max_residual <= 1e-5 * scale && (out.ratio_at_rounding || (out.h_ratio >= 3.5 && out.h_ratio <= 4.5));
}

TaylorCoefficients companion(const BoundaryFunction& f, int harmonics, const QuadratureConfig& q) {
  return f.integrable() ? to_taylor(compute_fourier(f, harmonics, q)) : nonintegrable_taylor(f, harmonics, q);
}

void boundary_check(VerificationReport& r, const BoundaryFunction& f, std::span<const double> corners,
                    const QuadratureConfig& q, const ReportOptions& o, double default_tol) {
  auto& out = r.boundary;
  out.ran = true;
  out.tolerance = o.boundary_tolerance.value_or(default_tol);

  struct Hole {
    double centre, radius;
  };
  std::vector<Hole> holes;
  for (const auto& s : f.singularities())
    if (s.kind != SingularityKind::Soft || s.diverges) holes.push_back({s.position, o.annotation_exclusion});
  for (double c : corners) holes.push_back({c, o.corner_exclusion});
  for (const Hole& hole : holes) out.excluded_arcs.emplace_back(hole.centre - hole.radius, hole.centre + hole.radius);
  std::sort(out.excluded_arcs.begin(), out.excluded_arcs.end());
  {
    std::vector<std::pair<double, double>> merged;
    for (const auto& arc : out.excluded_arcs) {
      if (!merged.empty() && arc.first <= merged.back().second) {
        merged.back().second = std::max(merged.back().second, arc.second);
      } else {
        merged.push_back(arc);
      }
    }
    out.excluded_arcs = merged;
  }
  for (const auto& arc : out.excluded_arcs) out.excluded_measure += arc.second - arc.first;

  auto excluded = [&](double theta) {
    for (const Hole& hole : holes) {
      const double d = std::fmod(std::abs(theta - hole.centre), kTwoPi);
      if (std::min(d, kTwoPi - d) < hole.radius) return true;
    }
    return false;
  };

  InnerAnalyticFunction w(companion(f, o.companion_harmonics, q));
  out.passed = true;
  for (int j = 0; j < o.boundary_angles; ++j) {
    const double theta = kTwoPi * (j + 0.5) / o.boundary_angles;
    if (excluded(theta)) continue;
    ++out.tested;
    try {
      const RadialLimit lim = radial_limit(w, theta);
      const double err = std::abs(lim.value - f.raw(theta));
      out.max_error = std::max(out.max_error, err);
      if (err > std::max(out.tolerance, lim.error_estimate)) out.passed = false;
    } catch (const Error& e) {
      out.passed = false;
      if (out.note.empty()) out.note = e.what();
    }
  }
}

std::vector<cplx> disk_points(std::mt19937_64& rng, int n, double radius) {
  if (!(radius > 0.0 && radius < 1.0)) throw Error(ErrorCode::BadParams, "sample radius must lie in (0, 1)");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(unit(rng));
    const double t = kTwoPi * unit(rng);
    out.push_back(std::polar(r, t));
  }
  return out;
}

}  // namespace

VerificationReport full_report(const DiskSolution& s, const ReportOptions& o) {
  VerificationReport r;
  r.seed = o.seed;
  r.subject = "disk: " + s.boundary.description();
  std::mt19937_64 rng(o.seed);
  auto u = [&](cplx z) { return evaluate_solution(s, z); };

  harmonicity(r, disk_points(rng, o.harmonicity_points, o.harmonicity_radius), u, [](cplx z) { return std::abs(z) < 1.0; }, o.step,
              data_scale(s.boundary, o.boundary_angles));

  r.mean_value.ran = true;
  double mean = 0.0;
  for (int j = 0; j < 256; ++j) mean += u(std::polar(0.5, kTwoPi * j / 256.0));
  mean /= 256.0;
  r.mean_value.abs_error = std::abs(mean - u(0.0));
  r.mean_value.passed = r.mean_value.abs_error <= 1e-12 * std::max(1.0, r.harmonicity.max_abs_u);

  QuadratureConfig q;
  q.rel_tol = std::min(s.meta.rel_tol, 1e-10);
  boundary_check(r, s.boundary, {}, q, o, 1e-6);

  if (s.boundary.integrable()) {
    auto& out = r.oracle;
    out.ran = true;
    out.passed = true;
    QuadratureConfig oq;
    oq.rel_tol = 1e-12;
    const Eigen::VectorXcd& c = s.w.c();
    const Eigen::Index n = c.size();
    const double tail = c.tail(n - n / 2).cwiseAbs().maxCoeff();
    for (const cplx& z : disk_points(rng, o.oracle_points, 0.9)) {
      const double rho = std::abs(z);
      const double dev = std::abs(u(z) - poisson_oracle(s.boundary, rho, std::arg(z), oq));
      const double bound = std::max(1e-8, tail * std::pow(rho, static_cast<double>(n)) / (1.0 - rho));
      out.max_deviation = std::max(out.max_deviation, dev);
      if (dev > bound) out.passed = false;
      ++out.points;
    }
  }
  return r;
}

VerificationReport full_report(const CurveSolution& s, const ReportOptions& o) {
  VerificationReport r;
  r.seed = o.seed;
  r.subject = s.map.label() + ": " + s.boundary.description();
  std::mt19937_64 rng(o.seed);
  auto u = [&](cplx p) { return evaluate_solution(s, p); };
  auto inside = [&](cplx p) { return s.inside(p); };

  std::vector<cplx> points;
  for (const cplx& z : disk_points(rng, o.harmonicity_points, o.harmonicity_radius)) points.push_back(s.map.forward(z));
  harmonicity(r, points, u, inside, o.step, data_scale(s.disk.boundary, o.boundary_angles));

  // Mean value on a circle around the image of the disk centre.
  r.mean_value.ran = true;
  const cplx centre = s.map.forward(0.0);
  double clearance = std::numeric_limits<double>::infinity();
  for (const cplx& b : s.outline) clearance = std::min(clearance, std::abs(b - centre));
  const double radius = 0.5 * clearance;
  double mean = 0.0;
  for (int j = 0; j < 256; ++j) mean += u(centre + std::polar(radius, kTwoPi * j / 256.0));
  mean /= 256.0;
  r.mean_value.abs_error = std::abs(mean - u(centre));
  r.mean_value.passed = r.mean_value.abs_error <= 1e-10 * std::max(1.0, r.harmonicity.max_abs_u);

  QuadratureConfig q;
  q.rel_tol = std::min(s.disk.meta.rel_tol, 1e-10);
  boundary_check(r, s.disk.boundary, s.correspondence.corner_angles(), q, o, 1e-4);

  auto& prod = r.product_identity;
  prod.ran = true;
  prod.passed = true;
  for (int j = 0; j < o.product_angles; ++j) {
    const double theta = kTwoPi * (j + 0.5) / o.product_angles;
    if (s.correspondence.distance_to_corner(theta) < o.corner_exclusion) continue;
    const double dev = std::abs(derivative_product_check(s.correspondence, theta) - 1.0);
    prod.max_deviation = std::max(prod.max_deviation, dev);
    ++prod.angles;
    if (dev > 1e-6) prod.passed = false;
  }
  return r;
}

namespace {

const char* verdict(bool ran, bool passed) { return !ran ? "skipped" : passed ? "pass" : "FAIL"; }

}  // namespace

std::string render_text(const VerificationReport& r) {
  std::ostringstream out;
  out << std::setprecision(3) << std::scientific;
  out << "verification report: " << r.subject << "\n";
  out << "  seed " << r.seed << "\n";
  const auto& h = r.harmonicity;
  out << "  harmonicity      " << verdict(h.ran, h.passed);
  if (h.ran) {
    out << "  points " << h.points << ", max residual " << h.max_residual << " (h), " << h.max_residual_half
        << " (h/2), ratio ";
    if (h.ratio_at_rounding) {
      out << "n/a (rounding level)";
    } else {
      out << std::fixed << std::setprecision(2) << h.h_ratio << std::scientific << std::setprecision(3);
    }
  }
  out << "\n";
  out << "  mean value       " << verdict(r.mean_value.ran, r.mean_value.passed);
  if (r.mean_value.ran) out << "  abs error " << r.mean_value.abs_error;
  out << "\n";
  const auto& b = r.boundary;
  out << "  boundary         " << verdict(b.ran, b.passed);
  if (b.ran) {
    out << "  angles " << b.tested << ", max error " << b.max_error << ", tolerance " << b.tolerance
        << ", excluded measure " << b.excluded_measure;
    if (!b.note.empty()) out << ", " << b.note;
  }
  out << "\n";
  out << "  poisson oracle   " << verdict(r.oracle.ran, r.oracle.passed);
  if (r.oracle.ran) out << "  points " << r.oracle.points << ", max deviation " << r.oracle.max_deviation;
  out << "\n";
  const auto& p = r.product_identity;
  out << "  product identity " << verdict(p.ran, p.passed);
  if (p.ran) out << "  angles " << p.angles << ", max deviation " << p.max_deviation;
  out << "\n";
  out << "  overall          " << (r.passed() ? "pass" : "FAIL") << "\n";
  return out.str();
}

std::string render_key_values(const VerificationReport& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "subject=" << r.subject << "\n";
  out << "seed=" << r.seed << "\n";
  out << "harmonicity.status=" << verdict(r.harmonicity.ran, r.harmonicity.passed) << "\n";
  if (r.harmonicity.ran) {
    out << "harmonicity.points=" << r.harmonicity.points << "\n";
    out << "harmonicity.max_residual=" << r.harmonicity.max_residual << "\n";
    out << "harmonicity.max_residual_half_step=" << r.harmonicity.max_residual_half << "\n";
    out << "harmonicity.h_ratio=" << r.harmonicity.h_ratio << "\n";
    out << "harmonicity.ratio_at_rounding=" << (r.harmonicity.ratio_at_rounding ? "true" : "false") << "\n";
  }
  out << "mean_value.status=" << verdict(r.mean_value.ran, r.mean_value.passed) << "\n";
  if (r.mean_value.ran) out << "mean_value.abs_error=" << r.mean_value.abs_error << "\n";
  out << "boundary.status=" << verdict(r.boundary.ran, r.boundary.passed) << "\n";
  if (r.boundary.ran) {
    out << "boundary.tested=" << r.boundary.tested << "\n";
    out << "boundary.max_error=" << r.boundary.max_error << "\n";
    out << "boundary.tolerance=" << r.boundary.tolerance << "\n";
    out << "boundary.excluded_measure=" << r.boundary.excluded_measure << "\n";
    for (std::size_t i = 0; i < r.boundary.excluded_arcs.size(); ++i)
      out << "boundary.excluded_arc." << i << "=" << r.boundary.excluded_arcs[i].first << ","
          << r.boundary.excluded_arcs[i].second << "\n";
    if (!r.boundary.note.empty()) out << "boundary.note=" << r.boundary.note << "\n";
  }
  out << "oracle.status=" << verdict(r.oracle.ran, r.oracle.passed) << "\n";
  if (r.oracle.ran) {
    out << "oracle.points=" << r.oracle.points << "\n";
    out << "oracle.max_deviation=" << r.oracle.max_deviation << "\n";
  }
  out << "product_identity.status=" << verdict(r.product_identity.ran, r.product_identity.passed) << "\n";
  if (r.product_identity.ran) {
    out << "product_identity.angles=" << r.product_identity.angles << "\n";
    out << "product_identity.max_deviation=" << r.product_identity.max_deviation << "\n";
  }
  out << "overall=" << (r.passed() ? "pass" : "FAIL") << "\n";
  return out.str();
}

}  // namespace dirichlet
