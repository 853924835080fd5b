#include <doctest.h>

#include <cmath>
#include <random>

#include "dirichlet/error.hpp"
#include "dirichlet/solver.hpp"

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

const ConditionCheck* find(const ConditionReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.condition == id) return &c;
  return nullptr;
}

// Square wave harmonic extension: (2/pi) atan(2 rho sin t / (1 - rho^2)).
double square_wave_u(cplx z) {
  const double r = std::abs(z);
  return 2.0 / pi * std::atan2(2.0 * r * std::sin(std::arg(z)), 1.0 - r * r);
}

std::vector<cplx> random_points(int n, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(std::polar(radius * std::sqrt(u(rng)), 2 * pi * u(rng)));
  return out;
}

}  // namespace

TEST_CASE("validation") {
  ConditionReport sq = validate(builtin("square_wave"));
  CHECK(sq.ok());
  CHECK(sq.theorem == "T1");
  CHECK(sq.pipeline_depth == 0);
  CHECK(find(sq, "integrability")->status == CheckStatus::Pass);
  CHECK(find(sq, "w-orientation")->status == CheckStatus::Unknown);

  ConditionReport hc = validate(builtin("half_cot"));
  CHECK(hc.ok());
  CHECK(hc.theorem == "T2");
  CHECK(hc.pipeline_depth == 1);
  CHECK(find(hc, "hardness-degrees")->status == CheckStatus::Pass);

  const ConformalMap cardioid = map_cardioid();
  const BoundaryCorrespondence corr = correspondence(cardioid);
  ConditionReport cusp = validate(rescale_period(builtin("half_cot"), corr.total_length()), &cardioid, &corr);
  CHECK_FALSE(cusp.ok());
  CHECK(cusp.theorem == "T6");
  CHECK(find(cusp, "corner-divergence")->status == CheckStatus::Fail);
  CHECK(cusp.failures().find("corner-divergence") != std::string::npos);

  // moved off the cusp the same data is admissible
  auto shifted = BoundaryFunction([](double t) { return 0.5 / std::tan((t - 4.0) * pi / 8.0); }, 8.0,
                                  {SingularityAnnotation::hard(4.0, 1)}, "half_cot at the far side");
  CHECK(validate(shifted, &cardioid, &corr).ok());

  auto infinite = BoundaryFunction([](double t) { return 1.0 / (t * t); }, kTwoPi,
                                   {SingularityAnnotation::hard(0.0, std::nullopt)}, "infinite degree");
  CHECK_FALSE(validate(infinite).ok());
  CHECK(code_of([&] { solve_disk(infinite); }) == ErrorCode::ValidationFailed);
  CHECK(code_of([&] { solve_curve(rescale_period(builtin("half_cot"), corr.total_length()), cardioid); }) ==
        ErrorCode::ValidationFailed);
}

TEST_CASE("disk: cosine") {
  DiskSolution s = solve_disk(builtin("cosine"));
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i)
    for (int j = 0; j < 64; ++j) {
      const double rho = 0.1 * i, t = 2 * pi * j / 64;
      worst = std::max(worst, std::abs(evaluate_solution(s, std::polar(rho, t)) - rho * std::cos(t)));
    }
  CHECK(worst <= 1e-12);
  CHECK(evaluate_solution(s, cplx(0.3, 0.4)) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(code_of([&] { evaluate_solution(s, cplx(0.8, 0.6)); }) == ErrorCode::OutsideDomain);
  CHECK(s.meta.theorem == "T1");
}

TEST_CASE("disk: square wave and sawtooth against closed forms") {
  DiskSolution s = solve_disk(builtin("square_wave"));
  CHECK(std::abs(evaluate_solution(s, cplx(0.0, 0.5)) - square_wave_u(cplx(0.0, 0.5))) < 1e-8);
  for (cplx z : random_points(50, 0.9, 3)) CHECK(std::abs(evaluate_solution(s, z) - square_wave_u(z)) < 1e-8);
  CHECK(std::abs(evaluate_solution(s, 0.0)) < 1e-12);

  // sawtooth: sum sin(k t)/k, extension atan(rho sin t / (1 - rho cos t))
  DiskSolution saw = solve_disk(builtin("sawtooth"));
  for (cplx z : random_points(50, 0.9, 4)) {
    const double exact = std::atan2(z.imag(), 1.0 - z.real());
    CHECK(std::abs(evaluate_solution(saw, z) - exact) < 1e-8);
  }
}

TEST_CASE("disk: half_cot through the non-integrable pipeline") {
  DiskSolution s = solve_disk(builtin("half_cot"));
  CHECK(s.meta.pipeline_depth == 1);
  CHECK(s.meta.theorem == "T2");
  CHECK(std::abs(evaluate_solution(s, cplx(-0.5, 0.0))) < 1e-8);
  for (cplx z : random_points(20, 0.9, 5)) {
    const double exact = (cplx(0.0, -1.0) * z / (1.0 - z)).real();
    CHECK(std::abs(evaluate_solution(s, z) - exact) < 1e-8);
  }
}

TEST_CASE("mean value at the center") {
  DiskSolution s = solve_disk(expression("e^cos(t)", kTwoPi, {}));
  // mean of e^{cos t} is I_0(1)
  CHECK(evaluate_solution(s, 0.0) == doctest::Approx(1.2660658777520082).epsilon(1e-12));
}

TEST_CASE("uniqueness: doubling K leaves interior values unchanged") {
  for (const char* name : {"square_wave", "half_cot"}) {
    SolverOptions a, b;
    a.harmonics = 256;
    b.harmonics = 512;
    DiskSolution s = solve_disk(builtin(name), a), t = solve_disk(builtin(name), b);
    double worst = 0.0;
    for (cplx z : random_points(100, 0.9, 6)) worst = std::max(worst, std::abs(evaluate_solution(s, z) - evaluate_solution(t, z)));
    INFO(name);
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("identity map reproduces the disk solution") {
  const auto f = builtin("square_wave");
  DiskSolution d = solve_disk(f);
  CurveSolution c = solve_curve(f, map_identity());
  CHECK(c.disk.meta.theorem == "T3");
  for (cplx z : random_points(30, 0.9, 7)) CHECK(std::abs(evaluate_solution(c, z) - evaluate_solution(d, z)) <= 1e-12);
}

TEST_CASE("rotation: arc length starts at the image of z = 1") {
  const double phi = pi / 2;
  CurveSolution c = solve_curve(expression("cos(t)", kTwoPi, {}), map_mobius(0.0, phi));
  for (cplx p : random_points(20, 0.9, 8)) {
    const double exact = std::abs(p) * std::cos(std::arg(p) - phi);
    CHECK(std::abs(evaluate_solution(c, p) - exact) < 1e-10);
  }
}

TEST_CASE("Mobius invariance") {
  // data F(psi) on the image circle, psi the polar angle; f_b(lambda) = F(psi_0 + lambda)
  const ConformalMap m = map_mobius(cplx(0.3, -0.4), 0.7);
  const double psi0 = std::arg(m.forward(1.0));
  auto F = [](double psi) { return std::cos(psi) + 0.5 * std::sin(3 * psi); };
  auto U = [](cplx p) {
    const double r = std::abs(p), t = std::arg(p);
    return r * std::cos(t) + 0.5 * r * r * r * std::sin(3 * t);
  };
  BoundaryFunction fb([&](double l) { return F(psi0 + l); }, kTwoPi, {}, "shifted trigonometric data");
  CurveSolution c = solve_curve(fb, m);
  double worst = 0.0;
  for (cplx p : random_points(50, 0.9, 9)) worst = std::max(worst, std::abs(evaluate_solution(c, p) - U(p)));
  CHECK(worst < 1e-10);

  // square wave in image coordinates: jumps are carried to the pulled-back data
  auto sq = [](double psi) { return std::sin(psi) >= 0.0 ? 1.0 : -1.0; };
  const double j0 = std::fmod(2 * kTwoPi - psi0, kTwoPi), j1 = std::fmod(j0 + pi, kTwoPi);
  BoundaryFunction gb([&](double l) { return sq(psi0 + l); }, kTwoPi,
                      {SingularityAnnotation::jump(std::min(j0, j1)), SingularityAnnotation::jump(std::max(j0, j1))},
                      "shifted square wave");
  SolverOptions o;
  o.quadrature.rel_tol = 1e-13;
  CurveSolution cs = solve_curve(gb, m, o);
  CHECK(cs.disk.boundary.singularities().size() == 2);
  worst = 0.0;
  for (cplx p : random_points(50, 0.8, 10)) worst = std::max(worst, std::abs(evaluate_solution(cs, p) - square_wave_u(p)));
  CHECK(worst < 1e-10);
}

TEST_CASE("pullback transports annotations and adds corners") {
  const ConformalMap cardioid = map_cardioid();
  const BoundaryCorrespondence corr = correspondence(cardioid);
  auto fb = BoundaryFunction([](double l) { return l < 2.0 ? 1.0 : 0.0; }, 8.0,
                             {SingularityAnnotation::jump(0.0), SingularityAnnotation::jump(2.0)}, "step");
  BoundaryFunction fa = pullback(fb, corr);
  // g(theta) = 4 (1 - cos(theta / 2)) = 2 at theta = 2 pi / 3
  bool moved = false, corner = false;
  for (const auto& s : fa.singularities()) {
    if (std::abs(s.position - 2 * pi / 3) < 1e-9) moved = s.kind == SingularityKind::Jump;
    if (s.position == 0.0) corner = true;
  }
  CHECK(moved);
  CHECK(corner);
  CHECK(fa(1.0) == 1.0);
  CHECK(fa(3.0) == 0.0);
}

TEST_CASE("cardioid solve") {
  CurveSolution c = solve_curve(expression("cos(2*pi*t/8)", 8.0, {}), map_cardioid());
  CHECK(c.disk.meta.theorem == "T4");
  CHECK(evaluate_solution(c, 0.0) == doctest::Approx(c.disk.w(0.0).real()).epsilon(1e-14));
  CHECK(c.inside(cplx(-0.5, 0.2)));
  CHECK_FALSE(c.inside(cplx(0.75, 10.0)));
  CHECK(code_of([&] { evaluate_solution(c, cplx(0.75, 10.0)); }) == ErrorCode::OutsideDomain);
  CHECK(code_of([] { solve_curve(expression("t", 7.0, {}), map_cardioid()); }) == ErrorCode::BadParams);
}
