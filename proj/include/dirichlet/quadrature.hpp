#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <vector>

#include "dirichlet/error.hpp"

namespace dirichlet {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  int max_depth = 40;
  /// Fraction of the innermost panel width kept away from a singular endpoint.
  double endpoint_offset = 1e-13;

  void validate() const;
};

/// Nodes and weights of an interpolatory rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1].
QuadratureRule gauss_legendre(int n);
const QuadratureRule& gauss_legendre_15();

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1 - x)^a (1 + x)^b,
/// built by Golub-Welsch from the Jacobi matrix of the weight.
QuadratureRule gauss_jacobi(int n, double a, double b);

/// Integration interval. A singular end hosts an integrable divergence (or a
/// non-smooth point) that the rule must approach without sampling.
struct Segment {
  double a = 0.0;
  double b = 0.0;
  bool singular_left = false;
  bool singular_right = false;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
};

template <typename T>
struct IntegrationResult {
  T value{};
  double error = 0.0;
  /// Integral of |f|; the scale against which rel_tol is measured.
  double magnitude = 0.0;
  /// Leaf panels on which `value` was assembled (excludes the tails).
  std::vector<Panel> panels;
  /// Extrapolated contributions of the excluded pieces next to singular ends.
  T tail_left{};
  T tail_right{};
};

namespace detail {

template <typename T, typename F>
T gl15(F& f, double a, double b, double& magnitude) {
  const QuadratureRule& rule = gauss_legendre_15();
  const double w = b - a;
  T sum{};
  double mag = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    T v = f(a + w * rule.nodes[i]);
    if (!std::isfinite(std::abs(v)))
      throw Error(ErrorCode::QuadratureFailure, "integrand is not finite at " + std::to_string(a + w * rule.nodes[i]));
    sum += rule.weights[i] * v;
    mag += rule.weights[i] * std::abs(v);
  }
  magnitude = mag * w;
  return sum * w;
}

// Initial mesh: geometric grading towards singular ends, then a width cap.
std::vector<Panel> initial_panels(const Segment& seg, const QuadratureConfig& cfg,
                                  double max_panel_width);

template <typename T, typename F>
T endpoint_tail(F& f, double end, double inner, double& magnitude) {
  // Integral over [end, inner] estimated from the two adjacent dyadic pieces
  // [inner, 2*inner - end] and [2*inner - end, 4*inner - 3*end].
  const double d = inner - end;
  double m1 = 0.0, m2 = 0.0;
  T s1 = gl15<T>(f, std::min(end + d, end + 2 * d), std::max(end + d, end + 2 * d), m1);
  T s2 = gl15<T>(f, std::min(end + 2 * d, end + 4 * d), std::max(end + 2 * d, end + 4 * d), m2);
  magnitude = m1;
  if (std::abs(s2) == 0.0) return s1;
  double q = std::abs(s1) / std::abs(s2);
  if (!(q < 0.95)) return s1;
  return s1 * (q / (1.0 - q));
}

}  // namespace detail

/// Globally adaptive composite 15-point Gauss-Legendre quadrature. Each panel's
/// error is |Q(panel) - Q(left) - Q(right)|; the worst panel is bisected until
/// the summed error drops below max(rel_tol * integral of |f|, abs_tol).
/// Singular ends are approached through a graded mesh stopping
/// endpoint_offset short of the end, plus an extrapolated tail.
template <typename T, typename F>
IntegrationResult<T> integrate_adaptive(F&& f, const Segment& seg, const QuadratureConfig& cfg = {},
                                        double max_panel_width = std::numeric_limits<double>::infinity(),
                                        double abs_tol = 0.0) {
  cfg.validate();
  if (!(seg.b > seg.a) || !std::isfinite(seg.a) || !std::isfinite(seg.b))
    throw Error(ErrorCode::QuadratureFailure, "empty or non-finite integration segment");

  struct Node {
    Panel panel;
    int depth;
    T left, right;
    double error;
    double magnitude;
    bool operator<(const Node& o) const { return error < o.error; }
  };

  auto make = [&](Panel p, int depth) {
    double m0 = 0.0, ml = 0.0, mr = 0.0;
    const double mid = 0.5 * (p.a + p.b);
    T whole = detail::gl15<T>(f, p.a, p.b, m0);
    T left = detail::gl15<T>(f, p.a, mid, ml);
    T right = detail::gl15<T>(f, mid, p.b, mr);
    double err = std::abs(whole - left - right);
    // Rounding floor, including the quantization of node positions relative
    // to the panel width (dominant for tiny panels far from the origin).
    const double position = std::max(std::abs(p.a), std::abs(p.b)) / (p.b - p.a);
    const double rounding = std::numeric_limits<double>::epsilon() * (64.0 + 8.0 * position) * (ml + mr);
    err = err > rounding ? err : 0.0;
    return Node{p, depth, left, right, err, ml + mr};
  };

  IntegrationResult<T> result;
  std::priority_queue<Node> queue;
  double total_error = 0.0;
  double total_magnitude = 0.0;
  const std::vector<Panel> initial = detail::initial_panels(seg, cfg, max_panel_width);
  for (const Panel& p : initial) {
    Node n = make(p, 0);
    total_error += n.error;
    total_magnitude += n.magnitude;
    queue.push(n);
  }

  if (seg.singular_left) {
    double m = 0.0;
    result.tail_left = detail::endpoint_tail<T>(f, seg.a, initial.front().a, m);
    total_magnitude += m;
  }
  if (seg.singular_right) {
    double m = 0.0;
    result.tail_right = detail::endpoint_tail<T>(f, seg.b, initial.back().b, m);
    total_magnitude += m;
  }

  auto target = [&] { return std::max(cfg.rel_tol * total_magnitude, abs_tol); };
  while (!queue.empty() && total_error > target()) {
    Node worst = queue.top();
    if (worst.error == 0.0) break;
    if (worst.depth >= cfg.max_depth)
      throw Error(ErrorCode::QuadratureFailure,
                  "adaptive refinement exhausted max_depth near " + std::to_string(worst.panel.a));
    queue.pop();
    total_error -= worst.error;
    total_magnitude -= worst.magnitude;
    const double mid = 0.5 * (worst.panel.a + worst.panel.b);
    for (Panel child : {Panel{worst.panel.a, mid}, Panel{mid, worst.panel.b}}) {
      Node n = make(child, worst.depth + 1);
      total_error += n.error;
      total_magnitude += n.magnitude;
      queue.push(n);
    }
  }

  result.error = std::max(total_error, 0.0);
  result.magnitude = total_magnitude;
  result.value = result.tail_left + result.tail_right;
  result.panels.reserve(2 * queue.size());
  while (!queue.empty()) {
    const Node& n = queue.top();
    result.value += n.left + n.right;
    const double mid = 0.5 * (n.panel.a + n.panel.b);
    result.panels.push_back({n.panel.a, mid});
    result.panels.push_back({mid, n.panel.b});
    queue.pop();
  }
  std::sort(result.panels.begin(), result.panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  return result;
}

template <typename F>
double integrate(F&& f, const Segment& seg, const QuadratureConfig& cfg = {}) {
  return integrate_adaptive<double>(std::forward<F>(f), seg, cfg).value;
}

template <typename F>
std::complex<double> integrate_complex(F&& f, const Segment& seg, const QuadratureConfig& cfg = {}) {
  return integrate_adaptive<std::complex<double>>(std::forward<F>(f), seg, cfg).value;
}

}  // namespace dirichlet
