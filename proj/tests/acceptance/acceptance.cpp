// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>

#include "dirichlet/error.hpp"
#include "dirichlet/inner_analytic.hpp"
#include "dirichlet/schwarz_christoffel.hpp"
#include "dirichlet/solver.hpp"
#include "dirichlet/verify.hpp"

using namespace dirichlet;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [not met]");
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<cplx> random_points(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(std::polar(radius * std::sqrt(u(rng)), 2 * pi * u(rng)));
  return out;
}

InnerAnalyticFunction series(int n, const std::function<cplx(int)>& rule) {
  Eigen::VectorXcd v(n + 1);
  for (int k = 0; k <= n; ++k) v(k) = rule(k);
  return InnerAnalyticFunction(v);
}

int cli(const std::string& args) {
  const int status = std::system((std::string(DIRICHLET_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome closed_form() {
  Outcome o;
  DiskSolution s = solve_disk(builtin("cosine"));
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i)
    for (int j = 0; j < 64; ++j) {
      const cplx z = std::polar(0.1 * i, 2 * pi * j / 64);
      worst = std::max(worst, std::abs(evaluate_solution(s, z) - z.real()));
    }
  o.require(worst <= 1e-12, "max |u - rho cos| = " + sci(worst));
  return o;
}

Outcome poisson_equivalence() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  const double one[] = {1.0};
  for (const char* name : {"constant", "cosine", "sawtooth", "square_wave"}) {
    const BoundaryFunction f = std::string(name) == "constant" ? builtin(name, one) : builtin(name);
    DiskSolution s = solve_disk(f);
    double worst = 0.0;
    QuadratureConfig q;
    q.rel_tol = 1e-12;
    for (cplx z : random_points(rng, 25, 0.9))
      worst = std::max(worst, std::abs(evaluate_solution(s, z) - poisson_oracle(f, std::abs(z), std::arg(z), q)));
    o.require(worst <= 1e-8, std::string(name) + " " + sci(worst));
  }
  return o;
}

Outcome boundary_reproduction() {
  Outcome o;
  const BoundaryFunction f = builtin("square_wave");
  const InnerAnalyticFunction w(to_taylor(compute_fourier(f, 1 << 18)));
  double worst = 0.0;
  int tested = 0;
  for (int j = 0; j < 64; ++j) {
    const double t = 2 * pi * (j + 0.5) / 64;
    if (f.distance(t, 0.0) < 0.05 || f.distance(t, pi) < 0.05) continue;
    const RadialLimit r = radial_limit(w, t);
    worst = std::max(worst, std::abs(r.value - f(t)));
    ++tested;
  }
  o.require(worst <= 1e-6, std::to_string(tested) + " angles, max error " + sci(worst));
  const RadialLimit mid = radial_limit(w, pi / 2);
  o.require(std::abs(mid.value - 1.0) <= 1e-6, "limit at pi/2 = 1 + " + sci(mid.value - 1.0));
  // u(rho, pi/2) = 1 - correction with the correction shrinking as rho -> 1
  double prev = 1.0;
  bool shrinking = true;
  for (double rho : {0.9, 0.99, 0.999}) {
    const double corr = 1.0 - w(std::polar(rho, pi / 2)).real();
    shrinking = shrinking && corr > 0.0 && corr < prev;
    prev = corr;
  }
  o.require(shrinking, "correction at rho = 0.999 is " + sci(prev));
  return o;
}

Outcome nonintegrable() {
  Outcome o;
  const TaylorCoefficients t = nonintegrable_taylor(builtin("half_cot"), 256);
  double worst = 0.0;
  for (int k = 1; k <= 32; ++k) worst = std::max(worst, std::abs(t.c(k) + cplx(0.0, 1.0)));
  o.require(worst <= 1e-6, "max |c_k + i| = " + sci(worst));
  o.require(std::abs(t.c(0)) <= 1e-6, "|c_0| = " + sci(std::abs(t.c(0))));
  DiskSolution s = solve_disk(builtin("half_cot"));
  std::mt19937_64 rng(20240611);
  double interior = 0.0;
  for (cplx z : random_points(rng, 20, 0.9))
    interior = std::max(interior, std::abs(evaluate_solution(s, z) - (cplx(0.0, -1.0) * z / (1.0 - z)).real()));
  o.require(interior <= 1e-8, "interior error " + sci(interior));
  return o;
}

Outcome chain_algebra() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const InnerAnalyticFunction w = series(64, [&](int) { return cplx(n(rng), n(rng)); });
    worst = std::max(worst, (angular_primitive(angular_derivative(w)).c() - w.proper_part().c()).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-15, "max entrywise deviation " + sci(worst));
  const InnerAnalyticFunction ls = series(1024, [](int k) { return k ? cplx(-1.0 / k, 0.0) : cplx(0.0); });
  const InnerAnalyticFunction hc = angular_derivative(ls);
  double rule = std::abs(hc.c()(0));
  bool real_zero = true;
  for (int k = 1; k <= 1024; ++k) {
    rule = std::max(rule, std::abs(hc.c()(k).imag() + 1.0));
    real_zero = real_zero && hc.c()(k).real() == 0.0;
  }
  // the rule gives i k (-1/k) = -i; only the rounding of 1/k remains
  o.require(real_zero && rule <= std::numeric_limits<double>::epsilon(),
            "log_sine -> half_cot max deviation " + sci(rule) + " (one ulp)");
  return o;
}

Outcome classification() {
  Outcome o;
  const int K = 16384;
  SolverOptions opt;
  opt.harmonics = K;
  const InnerAnalyticFunction soft = series(K, [](int k) { return k ? cplx(1.0 / (double(k) * k), 0.0) : cplx(0.0); });
  const SingularityVerdict a = classify(soft, 0.0);
  const SingularityVerdict b = classify(solve_disk(builtin("log_sine"), opt).w, 0.0);
  const SingularityVerdict c = classify(solve_disk(builtin("half_cot"), opt).w, 0.0);
  auto show = [](const SingularityVerdict& v) {
    return std::string(to_string(v.verdict)) + (v.degree ? " degree " + std::to_string(*v.degree) : "") + " (" +
           to_string(v.confidence) + ")";
  };
  o.require(a.verdict == Verdict::Soft && a.confidence == Confidence::Numerical, "1/k^2: " + show(a));
  o.require(b.verdict == Verdict::BorderlineHard && b.degree == 0 && b.confidence == Confidence::Numerical,
            "log_sine: " + show(b));
  o.require(c.verdict == Verdict::Hard && c.degree == 1 && c.confidence == Confidence::Numerical,
            "half_cot: " + show(c));
  return o;
}

Outcome conformal_identities() {
  Outcome o;
  const std::vector<ConformalMap> maps{map_identity(), map_mobius(cplx(0.4, -0.3), 0.8), map_perturbed(0.3),
                                       map_cardioid()};
  for (const ConformalMap& m : maps) {
    const BoundaryCorrespondence g = correspondence(m);
    double worst = 0.0;
    int tested = 0;
    for (int j = 0; j < 32; ++j) {
      const double t = 2 * pi * (j + 0.5) / 32;
      if (g.distance_to_corner(t) < 0.1) continue;
      worst = std::max(worst, std::abs(derivative_product_check(g, t) - 1.0));
      ++tested;
    }
    o.require(worst <= 1e-6, m.label() + " " + sci(worst) + " at " + std::to_string(tested) + " angles");
  }
  const BoundaryCorrespondence c = correspondence(map_cardioid());
  o.require(std::abs(c.total_length() - 8.0) <= 1e-9, "cardioid L - 8 = " + sci(c.total_length() - 8.0));
  QuadratureConfig q;
  q.rel_tol = 1e-12;
  const double turn = integrate([&](double l) { return 1.0 / c.slope(c.g_inverse(l)); },
                                Segment{0.0, c.total_length(), true, true}, q);
  o.require(std::abs(turn - 2 * pi) <= 1e-6, "closed integral of d theta - 2 pi = " + sci(turn - 2 * pi));
  return o;
}

Outcome schwarz_christoffel_symmetry() {
  Outcome o;
  const ConformalMap sq = schwarz_christoffel(Polygon::from_vertices({{0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}}));
  double e4 = 0.0;
  for (int k = 0; k < 4; ++k) e4 = std::max(e4, std::abs(std::polar(1.0, sq.corner_prevertices()[k]) - std::polar(1.0, k * pi / 2)));
  o.require(e4 <= 1e-8, "square " + sci(e4));
  const ConformalMap tri = schwarz_christoffel(Polygon::from_vertices({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}));
  double e3 = 0.0;
  for (int k = 0; k < 3; ++k)
    e3 = std::max(e3, std::abs(std::polar(1.0, tri.corner_prevertices()[k]) - std::polar(1.0, 2 * k * pi / 3)));
  o.require(e3 <= 1e-8, "triangle " + sci(e3));
  const ConformalMap rect = schwarz_christoffel(Polygon::from_vertices({{0, 0}, {2, 0}, {2, 1}, {0, 1}}));
  // side lengths from the arc-length correspondence, an integration independent of the solve
  const BoundaryCorrespondence g = correspondence(rect);
  auto pre = rect.corner_prevertices();
  const double ratio = (g.g(pre[1]) - g.g(pre[0])) / (g.g(pre[2]) - g.g(pre[1]));
  o.require(std::abs(ratio - 2.0) <= 1e-6, "2:1 rectangle ratio residual " + sci(ratio - 2.0));
  return o;
}

Outcome curve_solve() {
  Outcome o;
  const CurveSolution s = solve_curve(expression("cos(2*pi*t/8)", 8.0, {}), map_cardioid());
  const VerificationReport r = full_report(s);
  const auto& h = r.harmonicity;
  o.require(h.max_residual <= 1e-5 * h.max_abs_u,
            "harmonicity residual " + sci(h.max_residual) + " vs 1e-5 max|u| = " + sci(1e-5 * h.max_abs_u));
  o.require(h.h_ratio >= 3.5 && h.h_ratio <= 4.5, "h-ratio " + std::to_string(h.h_ratio));
  o.require(r.boundary.passed && r.boundary.max_error <= 1e-4,
            "boundary max error " + sci(r.boundary.max_error) + " at " + std::to_string(r.boundary.tested) + " angles");
  const auto dir = std::filesystem::temp_directory_path() / ("dirichlet_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "cusp.yaml") << "problem: {domain: cardioid, boundary: {builtin: half_cot}}\n";
  const int code = cli("solve " + (dir / "cusp.yaml").string());
  std::filesystem::remove_all(dir);
  o.require(code == 2, "corner-coincidence exit code " + std::to_string(code));
  return o;
}

Outcome uniqueness() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  const auto points = random_points(rng, 100, 0.9);
  for (const char* name : {"square_wave", "half_cot"}) {
    SolverOptions a, b;
    a.harmonics = 256;
    b.harmonics = 512;
    const DiskSolution s = solve_disk(builtin(name), a), t = solve_disk(builtin(name), b);
    double worst = 0.0;
    for (cplx z : points) worst = std::max(worst, std::abs(evaluate_solution(s, z) - evaluate_solution(t, z)));
    o.require(worst <= 1e-9, std::string(name) + " " + sci(worst));
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "closed-form reproduction", 1.0, closed_form},
      {2, "Poisson-oracle equivalence", 30.0, poisson_equivalence},
      {3, "boundary reproduction almost everywhere", 0.0, boundary_reproduction},
      {4, "non-integrable pipeline", 20.0, nonintegrable},
      {5, "chain algebra", 0.0, chain_algebra},
      {6, "classification", 0.0, classification},
      {7, "conformal identities", 0.0, conformal_identities},
      {8, "Schwarz-Christoffel symmetry", 60.0, schwarz_christoffel_symmetry},
      {9, "curve solve", 0.0, curve_solve},
      {10, "uniqueness sanity", 0.0, uniqueness},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0.0) o.require(secs < c.budget, "runtime budget " + std::to_string(int(c.budget)) + " s");
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
