#include <doctest.h>

#include <cmath>

#include "dirichlet/conformal.hpp"
#include "dirichlet/error.hpp"
#include "dirichlet/schwarz_christoffel.hpp"

using namespace dirichlet;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ScenarioError;
}

// Tanh-sinh quadrature on [a, b]; end-point distances are formed directly so
// inverse-square-root singularities at both ends are resolved.
template <class F>
double tanh_sinh(F&& f, double a, double b) {
  const double h = 1.0 / 64, half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = -256; i <= 256; ++i) {
    const double u = i * h;
    const double s = 0.5 * pi * std::sinh(u);
    const double gap = half * 2.0 / (1.0 + std::exp(2.0 * std::abs(s)));
    if (gap <= 0.0) continue;
    const double x = u < 0 ? a + gap : (u > 0 ? b - gap : a + half);
    if (x == a || x == b) continue;  // below the resolution of t; the dropped piece is O(sqrt(ulp))
    const double c = std::cosh(s);
    sum += f(x) * half * 0.5 * pi * std::cosh(u) / (c * c) * h;
  }
  return sum;
}

double side(const ConformalMap& m, double t0, double t1) {
  if (t1 <= t0) t1 += 2 * pi;
  return tanh_sinh([&](double t) { return std::abs(m.derivative(std::polar(1.0, t))); }, t0, t1);
}

}  // namespace

TEST_CASE("square prevertices sit at the fourth roots of unity") {
  const Polygon p = Polygon::from_vertices({{0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}});
  CHECK(std::abs(p.center) < 1e-15);
  const ConformalMap m = schwarz_christoffel(p);
  auto pre = m.corner_prevertices();
  REQUIRE(pre.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(pre[k] - k * pi / 2) < 1e-8);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(m.forward(std::polar(1.0, pre[k])) - p.vertices[k]) < 1e-8);
  CHECK(std::abs(m.forward(0.0)) < 1e-10);
}

TEST_CASE("equilateral triangle prevertices at the cube roots of unity") {
  const double r = std::sqrt(3.0) / 2;
  const ConformalMap m = schwarz_christoffel(Polygon::from_vertices({{0, 0}, {1, 0}, {0.5, r}}));
  auto pre = m.corner_prevertices();
  REQUIRE(pre.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(pre[k] - k * 2 * pi / 3) < 1e-8);
}

TEST_CASE("2:1 rectangle side ratio against an independent quadrature") {
  const Polygon p = Polygon::from_vertices({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
  const ConformalMap m = schwarz_christoffel(p);
  auto pre = m.corner_prevertices();
  REQUIRE(pre.size() == 4);
  // gaps are not symmetric for a non-square rectangle
  CHECK(std::abs((pre[1] - pre[0]) - (pre[2] - pre[1])) > 0.1);
  const double long_side = side(m, pre[0], pre[1]);
  const double short_side = side(m, pre[1], pre[2]);
  CHECK(std::abs(long_side / short_side - 2.0) < 1e-6);
  CHECK(std::abs(long_side - 2.0) < 1e-6);
  CHECK(std::abs(side(m, pre[3], pre[0]) - 1.0) < 1e-6);
  CHECK(std::abs(m.forward(0.0) - cplx(1.0, 0.5)) < 1e-8);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(m.forward(std::polar(1.0, pre[k])) - p.vertices[k]) < 1e-8);
}

TEST_CASE("L-shaped hexagon") {
  const Polygon p = Polygon::from_vertices({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(p.interior_angles[3] == doctest::Approx(1.5));
  const ConformalMap m = schwarz_christoffel(p);
  auto pre = m.corner_prevertices();
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(m.forward(std::polar(1.0, pre[k])) - p.vertices[k]) < 1e-8);
  // a round trip through the inverse at an interior point
  const cplx target(0.5, 1.5);
  CHECK(std::abs(m.forward(inverse(m, target)) - target) < 1e-10);
}

TEST_CASE("polygon validation") {
  // clockwise input is reoriented, keeping the first vertex
  const Polygon cw = Polygon::from_vertices({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(cw.vertices[0] == cplx(0, 0));
  CHECK(cw.vertices[1] == cplx(1, 0));
  for (double a : cw.interior_angles) CHECK(a == doctest::Approx(0.5));

  CHECK(code_of([] { Polygon::from_vertices({{0, 0}, {1, 0}}); }) == ErrorCode::InvalidPolygon);
  CHECK(code_of([] { Polygon::from_vertices({{0, 0}, {1, 1}, {1, 0}, {0, 1}}); }) == ErrorCode::InvalidPolygon);
  CHECK(code_of([] { Polygon::from_vertices({{0, 0}, {1, 0}, {2, 0}, {1, 1}}); }) == ErrorCode::InvalidPolygon);
  CHECK(code_of([] { Polygon::from_vertices({{0, 0}, {1, 0}, {1, 0}, {0, 1}}); }) == ErrorCode::InvalidPolygon);
  CHECK(code_of([] { Polygon::from_vertices({{0, 0}, {1, 0}, {0, NAN}}); }) == ErrorCode::InvalidPolygon);
}
