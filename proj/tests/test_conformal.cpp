#include <doctest.h>

#include <cmath>

#include "dirichlet/conformal.hpp"
#include "dirichlet/error.hpp"
#include "dirichlet/quadrature.hpp"

using namespace dirichlet;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

constexpr double kTwoPi = 2 * pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ScenarioError;
}

// Winding number of the image of the unit circle around p.
int winding(const ConformalMap& m, cplx p) {
  const int n = 20000;
  double turn = 0.0;
  cplx prev = m.forward(1.0) - p;
  for (int j = 1; j <= n; ++j) {
    const cplx cur = m.forward(std::polar(1.0, kTwoPi * j / n)) - p;
    turn += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(turn / kTwoPi));
}

}  // namespace

TEST_CASE("library maps") {
  CHECK(map_identity().forward(cplx(0.3, 0.4)) == cplx(0.3, 0.4));
  CHECK(std::abs(map_mobius(0.0, pi / 2).forward(0.5) - cplx(0.0, 0.5)) < 1e-15);
  const ConformalMap c = map_cardioid();
  CHECK(c.derivative(1.0) == cplx(0.0, 0.0));
  REQUIRE(c.corner_prevertices().size() == 1);
  CHECK(c.corner_prevertices()[0] == 0.0);
  CHECK_FALSE(map_perturbed(0.3).has_corners());
  // Mobius maps the disk onto itself: center goes to -a e^{i phi}
  CHECK(std::abs(map_mobius(cplx(0.2, 0.1), 0.7).forward(cplx(0.2, 0.1))) < 1e-15);

  CHECK(code_of([] { map_mobius(1.0, 0.0); }) == ErrorCode::BadParameter);
  CHECK(code_of([] { map_perturbed(0.5); }) == ErrorCode::BadParameter);
}

TEST_CASE("inverse") {
  CHECK(std::abs(inverse(map_identity(), cplx(0.2, -0.1)) - cplx(0.2, -0.1)) < 1e-15);
  const ConformalMap c = map_cardioid();
  const cplx z = std::polar(0.5, pi / 3);
  CHECK(std::abs(inverse(c, c.forward(z)) - z) < 1e-12);
  for (cplx w : {cplx(-0.9, 0.3), cplx(0.1, -0.95), cplx(0.6, 0.6)})
    CHECK(std::abs(inverse(c, c.forward(w)) - w) < 1e-11);
  const ConformalMap m = map_mobius(cplx(0.3, -0.2), 1.1);
  CHECK(std::abs(inverse(m, m.forward(cplx(-0.4, 0.5))) - cplx(-0.4, 0.5)) < 1e-12);

  // 0.75 + 10i lies outside the cardioid: winding number 0, while the center has 1
  CHECK(winding(c, cplx(0.75, 10.0)) == 0);
  CHECK(winding(c, cplx(0.0, 0.0)) == 1);
  CHECK(code_of([&] { inverse(c, cplx(0.75, 10.0)); }) == ErrorCode::NoConvergence);
}

TEST_CASE("identity correspondence") {
  const BoundaryCorrespondence g = correspondence(map_identity());
  CHECK(g.total_length() == doctest::Approx(kTwoPi).epsilon(1e-13));
  for (double t : {0.0, 0.3, 2.0, 5.5}) {
    CHECK(g.g(t) == doctest::Approx(t).epsilon(1e-12));
    CHECK(g.g_inverse(t) == doctest::Approx(t).epsilon(1e-12));
  }
  CHECK(derivative_product_check(g, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cardioid arc length") {
  // |gamma'(e^{it})| = |1 - e^{it}| = 2 sin(t/2), so g(t) = 4 (1 - cos(t/2)) and L = 8.
  const BoundaryCorrespondence g = correspondence(map_cardioid());
  CHECK(std::abs(g.total_length() - 8.0) < 1e-9);
  double worst = 0.0, round_trip = 0.0;
  for (int j = 0; j < 200; ++j) {
    const double t = kTwoPi * (j + 0.37) / 200;
    worst = std::max(worst, std::abs(g.g(t) - 4.0 * (1.0 - std::cos(t / 2))));
    round_trip = std::max(round_trip, std::abs(g.g_inverse(g.g(t)) - t));
  }
  CHECK(worst < 1e-9);
  CHECK(round_trip < 1e-9);
  // integral of d theta / d lambda over the curve is 2 pi
  QuadratureConfig q;
  q.rel_tol = 1e-12;
  const double total = integrate([&](double lambda) { return 1.0 / g.slope(g.g_inverse(lambda)); },
                                 Segment{0.0, g.total_length(), true, true}, q);
  CHECK(std::abs(total - kTwoPi) < 1e-6);
  CHECK(g.distance_to_corner(6.0) == doctest::Approx(kTwoPi - 6.0));
}

TEST_CASE("perturbed arc length against a trapezoid oracle") {
  const double eps = 0.3;
  double oracle = 0.0;
  const int n = 4096;  // periodic analytic integrand: trapezoid converges geometrically
  for (int j = 0; j < n; ++j) oracle += std::abs(1.0 + 2.0 * eps * std::polar(1.0, kTwoPi * j / n));
  oracle *= kTwoPi / n;
  CHECK(correspondence(map_perturbed(eps)).total_length() == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(correspondence(map_mobius(cplx(0.5, 0.2), 0.3)).total_length() == doctest::Approx(kTwoPi).epsilon(1e-11));
}

TEST_CASE("derivative product identity") {
  const std::vector<ConformalMap> maps{map_identity(), map_mobius(cplx(0.4, -0.3), 0.8), map_perturbed(0.3),
                                       map_cardioid()};
  for (const ConformalMap& m : maps) {
    const BoundaryCorrespondence g = correspondence(m);
    double worst = 0.0;
    int tested = 0;
    for (int j = 0; j < 32; ++j) {
      const double t = kTwoPi * (j + 0.5) / 32;
      if (g.distance_to_corner(t) < 0.1) continue;
      worst = std::max(worst, std::abs(derivative_product_check(g, t) - 1.0));
      ++tested;
    }
    INFO(m.label());
    CHECK(tested >= 30);
    CHECK(worst < 1e-6);
  }
  const BoundaryCorrespondence c = correspondence(map_cardioid());
  CHECK(code_of([&] { derivative_product_check(c, 1e-8); }) == ErrorCode::TooCloseToCorner);
  CHECK(code_of([] { correspondence(map_identity(), 16); }) == ErrorCode::BadParameter);
}
