#include "dirichlet/schwarz_christoffel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/NonLinearOptimization>

#include "dirichlet/boundary.hpp"
#include "dirichlet/error.hpp"
#include "dirichlet/quadrature.hpp"

namespace dirichlet {

using cplx = std::complex<double>;

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_touch(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on = [](cplx a, cplx b, cplx c, double d) {
    return d == 0.0 && std::min(a.real(), b.real()) <= c.real() && c.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= c.imag() && c.imag() <= std::max(a.imag(), b.imag());
  };
  return on(p1, p2, q1, d1) || on(p1, p2, q2, d2) || on(q1, q2, p1, d3) || on(q1, q2, p2, d4);
}

bool inside(const std::vector<cplx>& v, cplx p) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].imag() > p.imag()) != (v[j].imag() > p.imag()) &&
        p.real() < (v[j].real() - v[i].real()) * (p.imag() - v[i].imag()) / (v[j].imag() - v[i].imag()) + v[i].real())
      in = !in;
  }
  return in;
}

double distance_to_boundary(const std::vector<cplx>& v, cplx p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx a = v[i], b = v[(i + 1) % v.size()];
    const double t = std::clamp(std::real((p - a) * std::conj(b - a)) / std::norm(b - a), 0.0, 1.0);
    best = std::min(best, std::abs(p - (a + t * (b - a))));
  }
  return best;
}

}  // namespace

Polygon Polygon::from_vertices(std::vector<cplx> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3 || n > 12) throw Error(ErrorCode::InvalidPolygon, "polygon needs between 3 and 12 vertices");
  for (const cplx& v : vertices)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::InvalidPolygon, "polygon vertices must be finite");

  double diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) diameter = std::max(diameter, std::abs(vertices[i] - vertices[j]));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(vertices[i] - vertices[j]) <= 1e-12 * diameter)
        throw Error(ErrorCode::InvalidPolygon, "polygon vertices must be distinct");

  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) area2 += cross(vertices[i], vertices[(i + 1) % n]);
  if (area2 < 0) std::reverse(vertices.begin() + 1, vertices.end());

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
        throw Error(ErrorCode::InvalidPolygon, "polygon boundary intersects itself");
    }

  Polygon poly;
  poly.vertices = vertices;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx in = vertices[k] - vertices[(k + n - 1) % n];
    const cplx out = vertices[(k + 1) % n] - vertices[k];
    const double turn = std::arg(out / in) / std::numbers::pi;
    const double alpha = 1.0 - turn;
    if (!(alpha > 1e-9 && alpha < 2.0 - 1e-9) || std::abs(alpha - 1.0) <= 1e-9)
      throw Error(ErrorCode::InvalidPolygon, "vertex " + std::to_string(k + 1) + " has a degenerate or straight angle");
    poly.interior_angles.push_back(alpha);
    total += alpha;
  }
  if (std::abs(total - static_cast<double>(n - 2)) > 1e-8)
    throw Error(ErrorCode::InvalidPolygon, "interior angles do not sum to (N - 2) pi");

  // Area centroid, or the interior grid point farthest from the boundary.
  cplx centroid = 0.0;
  double a2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(vertices[i], vertices[(i + 1) % n]);
    a2 += c;
    centroid += c * (vertices[i] + vertices[(i + 1) % n]);
  }
  centroid /= 3.0 * a2;
  if (inside(vertices, centroid) && distance_to_boundary(vertices, centroid) > 1e-6 * diameter) {
    poly.center = centroid;
  } else {
    double lo_x = vertices[0].real(), hi_x = lo_x, lo_y = vertices[0].imag(), hi_y = lo_y;
    for (const cplx& v : vertices) {
      lo_x = std::min(lo_x, v.real());
      hi_x = std::max(hi_x, v.real());
      lo_y = std::min(lo_y, v.imag());
      hi_y = std::max(hi_y, v.imag());
    }
    double best = -1.0;
    for (int i = 1; i < 128; ++i)
      for (int j = 1; j < 128; ++j) {
        const cplx p(lo_x + (hi_x - lo_x) * i / 128.0, lo_y + (hi_y - lo_y) * j / 128.0);
        if (!inside(vertices, p)) continue;
        const double d = distance_to_boundary(vertices, p);
        if (d > best) {
          best = d;
          poly.center = p;
        }
      }
  }
  return poly;
}

namespace {

// The Schwarz-Christoffel integrand prod_j (1 - t/p_j)^{beta_j}, beta = alpha - 1,
// and its integrals from the origin or from a prevertex.
class ScIntegral {
 public:
  ScIntegral(std::vector<double> beta, std::vector<double> angles) : beta_(std::move(beta)) {
    set_angles(std::move(angles));
    for (double b : beta_) {
      left_rules_.push_back(gauss_jacobi(kJacobiNodes, 0.0, b));
      right_rules_.push_back(gauss_jacobi(kJacobiNodes, b, 0.0));
    }
  }

  void set_angles(std::vector<double> angles) {
    angles_ = std::move(angles);
    p_.clear();
    for (double a : angles_) p_.push_back(std::polar(1.0, a));
    const std::size_t n = p_.size();
    separation_.assign(n, 2.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) separation_[k] = std::min(separation_[k], std::abs(p_[j] - p_[k]));
  }

  const std::vector<cplx>& prevertices() const { return p_; }
  const std::vector<double>& angles() const { return angles_; }

  cplx integrand(cplx t, std::size_t skip = static_cast<std::size_t>(-1)) const {
    cplx v = 1.0;
    for (std::size_t j = 0; j < p_.size(); ++j)
      if (j != skip) v *= std::pow(1.0 - t / p_[j], beta_[j]);
    return v;
  }

  // int_0^{p_k} along the radius; Gauss-Jacobi at the prevertex end.
  cplx to_prevertex(std::size_t k) const {
    const cplx p = p_[k];
    const double d = std::min(0.5, 0.5 * separation_[k]);
    const auto& rule = right_rules_[k];
    cplx near = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = 1.0 - d * (1.0 - rule.nodes[i]) / 2.0;
      near += rule.weights[i] * integrand(s * p, k);
    }
    near *= std::pow(d / 2.0, beta_[k] + 1.0) * p;
    return near + segment(0.0, (1.0 - d) * p);
  }

  // int_{p_k}^{z} along the straight segment; Gauss-Jacobi at the start.
  cplx from_prevertex(std::size_t k, cplx z) const {
    const cplx p = p_[k];
    const cplx l = z - p;
    const double len = std::abs(l);
    if (len == 0.0) return 0.0;
    const double s0 = std::min(1.0, 0.5 * separation_[k] / len);
    const auto& rule = left_rules_[k];
    const cplx factor = std::pow(-l / p, beta_[k]);
    cplx near = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = s0 * (1.0 + rule.nodes[i]) / 2.0;
      near += rule.weights[i] * integrand(p + s * l, k);
    }
    near *= std::pow(s0 / 2.0, beta_[k] + 1.0) * factor * l;
    if (s0 < 1.0) near += segment(p + s0 * l, z);
    return near;
  }

  // Smooth straight-segment integral by adaptive Gauss-Legendre.
  cplx segment(cplx a, cplx b) const {
    const cplx l = b - a;
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-14;
    cfg.max_depth = 50;
    return integrate_complex([&](double s) { return l * integrand(a + s * l); }, Segment{0.0, 1.0}, cfg);
  }

  // int_0^z from the closest of {0, p_k}.
  cplx primitive(cplx z, const std::vector<cplx>& at_prevertex) const {
    std::size_t best = p_.size();
    double dist = std::abs(z);
    for (std::size_t k = 0; k < p_.size(); ++k)
      if (std::abs(z - p_[k]) < dist) {
        dist = std::abs(z - p_[k]);
        best = k;
      }
    if (best == p_.size()) return segment(0.0, z);
    return at_prevertex[best] + from_prevertex(best, z);
  }

  const std::vector<double>& beta() const { return beta_; }

 private:
  static constexpr int kJacobiNodes = 40;
  std::vector<double> beta_;
  std::vector<double> angles_;
  std::vector<cplx> p_;
  std::vector<double> separation_;
  std::vector<QuadratureRule> left_rules_, right_rules_;
};

std::vector<double> angles_from(const Eigen::VectorXd& y) {
  // Gaps 2 pi softmax([y, 0]); the first prevertex is pinned at angle 0.
  const Eigen::Index m = y.size();
  double top = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) top = std::max(top, y(i));
  std::vector<double> w;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    w.push_back(std::exp(y(i) - top));
    sum += w.back();
  }
  w.push_back(std::exp(-top));
  sum += w.back();
  std::vector<double> angles{0.0};
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    acc += kTwoPi * w[static_cast<std::size_t>(i)] / sum;
    angles.push_back(acc);
  }
  return angles;
}

struct ParameterProblem {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Polygon* polygon;
  std::vector<double> beta;
  double scale;

  int inputs() const { return static_cast<int>(polygon->vertices.size()) - 1; }
  int values() const { return inputs(); }

  int operator()(const Eigen::VectorXd& y, Eigen::VectorXd& r) const {
    const auto& v = polygon->vertices;
    const std::size_t n = v.size();
    ScIntegral sc(beta, angles_from(y));
    std::vector<cplx> at;
    for (std::size_t k = 0; k < n; ++k) at.push_back(sc.to_prevertex(k));
    const double side0 = std::abs(at[1] - at[0]);
    const double target0 = std::abs(v[1] - v[0]);
    Eigen::Index row = 0;
    for (std::size_t k = 1; k + 2 < n; ++k) {
      const double side = std::abs(at[k + 1] - at[k]);
      r(row++) = std::log(side / side0) - std::log(std::abs(v[k + 1] - v[k]) / target0);
    }
    const cplx c = (v[1] - v[0]) / (at[1] - at[0]);
    const cplx center = v[0] - c * at[0];
    r(row++) = (center.real() - polygon->center.real()) / scale;
    r(row++) = (center.imag() - polygon->center.imag()) / scale;
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (!std::isfinite(r(i))) r(i) = 1e6;
    return 0;
  }

  // Central differences with an absolute step: the unknowns sit near zero,
  // where relative steps fall into quadrature noise.
  int df(const Eigen::VectorXd& y, Eigen::MatrixXd& jac) const {
    constexpr double h = 1e-6;
    Eigen::VectorXd plus(values()), minus(values());
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      Eigen::VectorXd yp = y, ym = y;
      yp(j) += h;
      ym(j) -= h;
      (*this)(yp, plus);
      (*this)(ym, minus);
      jac.col(j) = (plus - minus) / (2 * h);
    }
    return 0;
  }
};

}  // namespace

ConformalMap schwarz_christoffel(const Polygon& polygon, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParameter, "Schwarz-Christoffel tolerance must be positive");
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  std::vector<double> beta;
  for (double a : polygon.interior_angles) beta.push_back(a - 1.0);
  double diameter = 0.0;
  for (const cplx& a : v)
    for (const cplx& b : v) diameter = std::max(diameter, std::abs(a - b));

  ParameterProblem problem{&polygon, beta, diameter};
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) - 1);
  Eigen::LevenbergMarquardt<ParameterProblem> lm(problem);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = 2000;
  lm.minimize(y);

  auto sc = std::make_shared<ScIntegral>(beta, angles_from(y));
  std::vector<cplx> at;
  for (std::size_t k = 0; k < n; ++k) at.push_back(sc->to_prevertex(k));

  const cplx c = (v[1] - v[0]) / (at[1] - at[0]);
  const cplx a = v[0] - c * at[0];
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double mapped = std::abs(at[(k + 1) % n] - at[k]) / std::abs(at[1] - at[0]);
    const double target = std::abs(v[(k + 1) % n] - v[k]) / std::abs(v[1] - v[0]);
    worst = std::max(worst, std::abs(mapped / target - 1.0));
  }
  worst = std::max(worst, std::abs(a - polygon.center) / diameter);
  if (!(worst <= tol))
    throw Error(ErrorCode::ParameterSolveFailure,
                "Schwarz-Christoffel parameter residual " + std::to_string(worst) + " exceeds tolerance");

  std::ostringstream label;
  label.precision(17);
  label << "schwarz-christoffel(" << n << " vertices; prevertex angles";
  for (double ang : sc->angles()) label << ' ' << ang;
  label << ")";

  auto images = std::make_shared<const std::vector<cplx>>(at);
  std::shared_ptr<const ScIntegral> shared = sc;
  return ConformalMap([shared, images, a, c](cplx z) { return a + c * shared->primitive(z, *images); },
                      [shared, c](cplx z) { return c * shared->integrand(z); }, sc->angles(), label.str());
}

}  // namespace dirichlet
