#include "dirichlet/solver.hpp"

#include <algorithm>
#include <cmath>

#include "dirichlet/error.hpp"
#include "dirichlet/spectral.hpp"

namespace dirichlet {

using cplx = std::complex<double>;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Unknown: return "unknown";
  }
  return "?";
}

bool ConditionReport::ok() const {
  return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
}

std::string ConditionReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.status != CheckStatus::Fail) continue;
    if (!out.empty()) out += "; ";
    out += c.condition + " (" + c.theorem + "): " + c.detail;
  }
  return out;
}

ConditionReport validate(const BoundaryFunction& f, const ConformalMap* map, const BoundaryCorrespondence* corr) {
  const bool integrable = f.integrable();
  const bool corners = map != nullptr && map->has_corners();
  ConditionReport report;
  if (map == nullptr) {
    report.theorem = integrable ? "T1" : "T2";
  } else if (!corners) {
    report.theorem = integrable ? "T3" : "T5";
  } else {
    report.theorem = integrable ? "T4" : "T6";
  }
  const std::string& t = report.theorem;
  report.pipeline_depth = std::max(0, f.max_hardness());

  int hard = 0;
  for (const auto& s : f.singularities())
    if (s.kind == SingularityKind::Hard || s.kind == SingularityKind::BorderlineHard) ++hard;

  if (integrable) {
    report.checks.push_back({"integrability", t, CheckStatus::Pass, "integrable on the whole boundary"});
  } else {
    report.checks.push_back({"integrability", t, CheckStatus::Pass,
                             "locally integrable away from " + std::to_string(hard) + " annotated hard points"});
  }
  report.checks.push_back({"hard-count", t, CheckStatus::Pass,
                           std::to_string(f.singularities().size()) + " annotated points (finite)"});
  if (!integrable) {
    const bool finite = f.max_hardness() >= 0;
    report.checks.push_back({"hardness-degrees", t, finite ? CheckStatus::Pass : CheckStatus::Fail,
                             finite ? "maximum degree of hardness " + std::to_string(f.max_hardness())
                                    : "a hard point has no finite degree of hardness"});
  }

  if (corners) {
    std::optional<BoundaryCorrespondence> own;
    if (corr == nullptr) {
      own.emplace(correspondence(*map));
      corr = &*own;
    }
    std::string clash;
    for (const auto& s : f.singularities()) {
      if (!s.diverges) continue;
      const double theta = corr->g_inverse(s.position * corr->total_length() / f.period());
      if (corr->distance_to_corner(theta) <= 1e-9) {
        if (!clash.empty()) clash += ", ";
        clash += std::to_string(s.position);
      }
    }
    report.checks.push_back({"corner-divergence", t, clash.empty() ? CheckStatus::Pass : CheckStatus::Fail,
                             clash.empty() ? "no divergence of f at a corner of the curve"
                                           : "f diverges at a corner of the curve (parameter " + clash + ")"});
  }
  report.checks.push_back({"w-orientation", t, CheckStatus::Unknown,
                           "hard points of w where f is soft are only visible after the solve (classify)"});
  return report;
}

DiskSolution solve_disk(const BoundaryFunction& f, const SolverOptions& options) {
  ConditionReport report = validate(f);
  if (!report.ok()) throw Error(ErrorCode::ValidationFailed, report.failures());
  TaylorCoefficients c = f.integrable() ? to_taylor(compute_fourier(f, options.harmonics, options.quadrature))
                                        : nonintegrable_taylor(f, options.harmonics, options.quadrature);
  SolveMeta meta{options.harmonics, options.quadrature.rel_tol, report.pipeline_depth, report.theorem};
  return DiskSolution{InnerAnalyticFunction(std::move(c)), f, std::move(meta), std::move(report)};
}

BoundaryFunction pullback(const BoundaryFunction& f_b, const BoundaryCorrespondence& corr) {
  const double scale = f_b.period() / corr.total_length();
  std::vector<SingularityAnnotation> marks;
  for (const auto& s : f_b.singularities()) {
    SingularityAnnotation a = s;
    a.position = corr.g_inverse(s.position / scale);
    marks.push_back(a);
  }
  for (double c : corr.corner_angles()) {
    const bool taken = std::any_of(marks.begin(), marks.end(), [&](const auto& m) {
      const double d = std::abs(m.position - c);
      return std::min(d, kTwoPi - d) <= 1e-12 * kTwoPi;
    });
    if (!taken) marks.push_back(SingularityAnnotation::soft(c));
  }
  // Annotations closer than the coincidence tolerance collapse onto one point.
  std::sort(marks.begin(), marks.end(), [](const auto& a, const auto& b) { return a.position < b.position; });
  auto evaluator = [f_b, corr, scale](double theta) { return f_b.raw(corr.g(theta) * scale); };
  return {evaluator, kTwoPi, std::move(marks), "pullback(" + f_b.description() + ")"};
}

CurveSolution solve_curve(const BoundaryFunction& f_b, const ConformalMap& map, const SolverOptions& options) {
  BoundaryCorrespondence corr = correspondence(map, options.correspondence_grid);
  const double length = corr.total_length();
  if (std::abs(f_b.period() - length) > 1e-9 * std::max(1.0, length))
    throw Error(ErrorCode::BadParams, "boundary data period " + std::to_string(f_b.period()) +
                                          " differs from the curve length " + std::to_string(length));
  ConditionReport report = validate(f_b, &map, &corr);
  if (!report.ok()) throw Error(ErrorCode::ValidationFailed, report.failures());

  BoundaryFunction f_a = pullback(f_b, corr);
  TaylorCoefficients c = f_a.integrable() ? to_taylor(compute_fourier(f_a, options.harmonics, options.quadrature))
                                          : nonintegrable_taylor(f_a, options.harmonics, options.quadrature);
  SolveMeta meta{options.harmonics, options.quadrature.rel_tol, report.pipeline_depth, report.theorem};
  DiskSolution disk{InnerAnalyticFunction(std::move(c)), f_a, std::move(meta), std::move(report)};

  std::vector<cplx> outline;
  constexpr int kOutline = 4096;
  for (int j = 0; j < kOutline; ++j) outline.push_back(map.forward(std::polar(1.0, kTwoPi * j / kOutline)));
  return CurveSolution{std::move(disk), map, std::move(corr), f_b, std::move(outline)};
}

bool CurveSolution::inside(cplx p) const {
  bool in = false;
  const std::size_t n = outline.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const cplx a = outline[i], b = outline[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag()) &&
        p.real() < (b.real() - a.real()) * (p.imag() - a.imag()) / (b.imag() - a.imag()) + a.real())
      in = !in;
  }
  return in;
}

double evaluate_solution(const DiskSolution& s, cplx p) {
  if (!(std::abs(p) < 1.0))
    throw Error(ErrorCode::OutsideDomain, "point (" + std::to_string(p.real()) + ", " + std::to_string(p.imag()) +
                                              ") is not inside the unit disk");
  return s.w(p).real();
}

double evaluate_solution(const CurveSolution& s, cplx p) {
  if (!s.inside(p))
    throw Error(ErrorCode::OutsideDomain, "point (" + std::to_string(p.real()) + ", " + std::to_string(p.imag()) +
                                              ") is not inside " + s.map.label());
  const cplx z = inverse(s.map, p);
  if (!(std::abs(z) < 1.0))
    throw Error(ErrorCode::OutsideDomain, "point (" + std::to_string(p.real()) + ", " + std::to_string(p.imag()) +
                                              ") maps onto the boundary of " + s.map.label());
  return s.disk.w(z).real();
}

}  // namespace dirichlet
