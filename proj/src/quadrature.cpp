#include "dirichlet/quadrature.hpp"

#include <Eigen/Dense>
#include <numbers>

namespace dirichlet {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::BadParams, "rel_tol must be positive");
  if (max_depth < 1) throw Error(ErrorCode::BadParams, "max_depth must be at least 1");
  if (!(endpoint_offset > 0.0 && endpoint_offset < 1.0))
    throw Error(ErrorCode::BadParams, "endpoint_offset must lie in (0, 1)");
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::BadParams, "Gauss-Legendre needs n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[idx] = 0.5 * (1.0 + x);
    rule.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const QuadratureRule& gauss_legendre_15() {
  static const QuadratureRule rule = gauss_legendre(15);
  return rule;
}

QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::BadParams, "Gauss-Jacobi needs n >= 1");
  if (!(a > -1.0 && b > -1.0)) throw Error(ErrorCode::BadParams, "Gauss-Jacobi needs a, b > -1");

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                         std::lgamma(ab + 2.0);
  const double mu0 = std::exp(log_mu0);

  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

namespace detail {

namespace {

void graded(double end, double inner_end, double offset, bool towards_left, std::vector<Panel>& out) {
  // Nodes end + w * 2^-j for j = 0..J, then the offset node.
  const double w = inner_end - end;  // signed
  std::vector<double> nodes;
  nodes.push_back(inner_end);
  // Grading stops where panels would fall below a few ulps of the end point.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(end), std::abs(inner_end));
  double frac = 0.5;
  while (frac > 2.0 * offset && std::abs(w) * frac > 2.0 * floor) {
    nodes.push_back(end + w * frac);
    frac *= 0.5;
  }
  nodes.push_back(end + w * std::max(offset, std::min(frac, floor / std::abs(w))));
  std::vector<Panel> local;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double x = nodes[i], y = nodes[i + 1];
    if (x == y) continue;
    local.push_back({std::min(x, y), std::max(x, y)});
  }
  if (towards_left) std::reverse(local.begin(), local.end());
  out.insert(out.end(), local.begin(), local.end());
}

}  // namespace

std::vector<Panel> initial_panels(const Segment& seg, const QuadratureConfig& cfg,
                                  double max_panel_width) {
  std::vector<Panel> coarse;
  const double mid = 0.5 * (seg.a + seg.b);
  if (seg.singular_left && seg.singular_right) {
    graded(seg.a, mid, cfg.endpoint_offset, true, coarse);
    std::vector<Panel> right;
    graded(seg.b, mid, cfg.endpoint_offset, false, right);
    coarse.insert(coarse.end(), right.begin(), right.end());
  } else if (seg.singular_left) {
    graded(seg.a, seg.b, cfg.endpoint_offset, true, coarse);
  } else if (seg.singular_right) {
    graded(seg.b, seg.a, cfg.endpoint_offset, false, coarse);
  } else {
    coarse.push_back({seg.a, seg.b});
  }

  if (!std::isfinite(max_panel_width)) return coarse;
  std::vector<Panel> capped;
  for (const Panel& p : coarse) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((p.b - p.a) / max_panel_width)));
    for (int i = 0; i < pieces; ++i) {
      double x0 = p.a + (p.b - p.a) * i / pieces;
      double x1 = i + 1 == pieces ? p.b : p.a + (p.b - p.a) * (i + 1) / pieces;
      capped.push_back({x0, x1});
    }
  }
  return capped;
}

}  // namespace detail

}  // namespace dirichlet
