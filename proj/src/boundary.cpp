#include "dirichlet/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "dirichlet/error.hpp"
#include "dirichlet/expression.hpp"

namespace dirichlet {

const char* to_string(SingularityKind kind) {
  switch (kind) {
    case SingularityKind::Jump: return "jump";
    case SingularityKind::Soft: return "soft";
    case SingularityKind::BorderlineHard: return "borderline-hard";
    case SingularityKind::Hard: return "hard";
  }
  return "unknown";
}

SingularityAnnotation SingularityAnnotation::jump(double position) {
  return {position, SingularityKind::Jump, std::nullopt, false};
}

SingularityAnnotation SingularityAnnotation::soft(double position) {
  return {position, SingularityKind::Soft, std::nullopt, false};
}

SingularityAnnotation SingularityAnnotation::borderline(double position, bool diverges) {
  return {position, SingularityKind::BorderlineHard, 0, diverges};
}

SingularityAnnotation SingularityAnnotation::hard(double position, std::optional<int> degree,
                                                  bool diverges) {
  return {position, SingularityKind::Hard, degree, diverges};
}

bool SingularityAnnotation::integrable() const noexcept { return kind != SingularityKind::Hard; }

int SingularityAnnotation::hardness() const noexcept {
  if (kind != SingularityKind::Hard) return 0;
  return degree ? *degree : -1;
}

namespace {

int severity(const SingularityAnnotation& a) {
  switch (a.kind) {
    case SingularityKind::Soft: return 0;
    case SingularityKind::Jump: return 1;
    case SingularityKind::BorderlineHard: return 2;
    case SingularityKind::Hard: return a.degree ? 3 + *a.degree : 1000;
  }
  return 0;
}

}  // namespace

BoundaryFunction::BoundaryFunction(Evaluator evaluator, double period,
                                   std::vector<SingularityAnnotation> singularities,
                                   std::string description)
    : evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      period_(period),
      singularities_(std::move(singularities)),
      description_(std::move(description)) {
  if (!(period_ > 0.0) || !std::isfinite(period_))
    throw Error(ErrorCode::BadParams, "boundary period must be positive and finite");
  if (!*evaluator_) throw Error(ErrorCode::BadParams, "boundary evaluator is empty");

  for (auto& s : singularities_) {
    if (!std::isfinite(s.position))
      throw Error(ErrorCode::BadParams, "singularity position must be finite");
    s.position = canonical(s.position);
    switch (s.kind) {
      case SingularityKind::BorderlineHard:
        if (s.degree && *s.degree != 0)
          throw Error(ErrorCode::BadParams, "borderline-hard singularities have degree 0");
        s.degree = 0;
        break;
      case SingularityKind::Hard:
        if (s.degree && *s.degree < 1)
          throw Error(ErrorCode::BadParams, "hard singularities need degree >= 1");
        break;
      case SingularityKind::Jump:
        s.diverges = false;
        s.degree.reset();
        break;
      case SingularityKind::Soft:
        s.degree.reset();
        break;
    }
  }
  std::sort(singularities_.begin(), singularities_.end(),
            [](const auto& a, const auto& b) { return a.position < b.position; });
  for (std::size_t i = 0; i < singularities_.size(); ++i) {
    std::size_t j = (i + 1) % singularities_.size();
    if (i != j && distance(singularities_[i].position, singularities_[j].position) <=
                      coincidence_tolerance())
      throw Error(ErrorCode::BadParams, "singularity positions must be pairwise distinct");
  }
}

double BoundaryFunction::canonical(double t) const noexcept {
  double r = std::fmod(t, period_);
  if (r < 0.0) r += period_;
  if (r >= period_) r = 0.0;
  return r;
}

double BoundaryFunction::distance(double s, double t) const noexcept {
  double d = std::abs(canonical(s) - canonical(t));
  return std::min(d, period_ - d);
}

double BoundaryFunction::operator()(double t) const {
  double c = canonical(t);
  for (const auto& s : singularities_) {
    if (s.diverges && distance(c, s.position) <= coincidence_tolerance())
      throw Error(ErrorCode::EvalAtSingularity,
                  description_ + " diverges at " + std::to_string(s.position));
  }
  return (*evaluator_)(c);
}

int BoundaryFunction::max_hardness() const noexcept {
  int worst = 0;
  for (const auto& s : singularities_) {
    int h = s.hardness();
    if (h < 0) return -1;
    worst = std::max(worst, h);
  }
  return worst;
}

bool BoundaryFunction::integrable() const noexcept {
  return std::all_of(singularities_.begin(), singularities_.end(),
                     [](const auto& s) { return s.integrable(); });
}

BoundaryFunction BoundaryFunction::with_annotations(std::vector<SingularityAnnotation> singularities,
                                                    std::string description) const {
  BoundaryFunction result([ev = evaluator_](double t) { return (*ev)(t); }, period_,
                          std::move(singularities), std::move(description));
  result.evaluator_ = evaluator_;
  return result;
}

double sample(const BoundaryFunction& f, double t) { return f(t); }

namespace {

double param_or(std::span<const double> params, std::size_t i, double fallback) {
  return i < params.size() ? params[i] : fallback;
}

void expect_at_most(std::string_view name, std::span<const double> params, std::size_t n) {
  if (params.size() > n)
    throw Error(ErrorCode::BadParams, std::string(name) + " takes at most " + std::to_string(n) +
                                          " parameter(s)");
  for (double p : params)
    if (!std::isfinite(p)) throw Error(ErrorCode::BadParams, "parameters must be finite");
}

}  // namespace

namespace {

// Representative in [-pi, pi): values just below 2*pi become small negative
// offsets, exact in floating point, so 0 and 2*pi are the same singular point.
double centered(double t) { return t >= std::numbers::pi ? t - kTwoPi : t; }

}  // namespace

BoundaryFunction builtin(std::string_view name, std::span<const double> params) {
  using std::numbers::pi;
  if (name == "constant") {
    if (params.size() != 1 || !std::isfinite(params[0]))
      throw Error(ErrorCode::BadParams, "constant takes exactly one finite parameter");
    double v = params[0];
    return {[v](double) { return v; }, kTwoPi, {}, "constant(" + std::to_string(v) + ")"};
  }
  if (name == "cosine" || name == "sine") {
    expect_at_most(name, params, 2);
    double amplitude = param_or(params, 0, 1.0);
    double harmonic = param_or(params, 1, 1.0);
    if (harmonic < 0.0 || harmonic != std::floor(harmonic))
      throw Error(ErrorCode::BadParams, "harmonic must be a non-negative integer");
    if (name == "cosine")
      return {[amplitude, harmonic](double t) { return amplitude * std::cos(harmonic * t); }, kTwoPi,
              {}, "cosine"};
    return {[amplitude, harmonic](double t) { return amplitude * std::sin(harmonic * t); }, kTwoPi,
            {}, "sine"};
  }
  if (name == "square_wave") {
    expect_at_most(name, params, 0);
    return {[](double t) {
              if (t == 0.0 || t == pi) return 0.0;
              return t < pi ? 1.0 : -1.0;
            },
            kTwoPi,
            {SingularityAnnotation::jump(0.0), SingularityAnnotation::jump(pi)},
            "square_wave"};
  }
  if (name == "sawtooth") {
    expect_at_most(name, params, 0);
    return {[](double t) { return t == 0.0 ? 0.0 : 0.5 * (pi - t); }, kTwoPi,
            {SingularityAnnotation::jump(0.0)}, "sawtooth"};
  }
  if (name == "log_sine") {
    expect_at_most(name, params, 0);
    return {[](double t) { return std::log(std::abs(std::sin(0.5 * centered(t)))); }, kTwoPi,
            {SingularityAnnotation::borderline(0.0)}, "log_sine"};
  }
  if (name == "half_cot") {
    expect_at_most(name, params, 0);
    return {[](double t) { return 0.5 / std::tan(0.5 * centered(t)); }, kTwoPi,
            {SingularityAnnotation::hard(0.0, 1)}, "half_cot"};
  }
  if (name == "expression")
    throw Error(ErrorCode::BadParams, "expression boundary functions need text; use expression()");
  throw Error(ErrorCode::UnknownBuiltin, std::string(name));
}

BoundaryFunction expression(std::string_view text, double period,
                            std::vector<SingularityAnnotation> singularities) {
  Expression e = Expression::parse(text, period);
  return {[e](double t) { return e(t); }, period, std::move(singularities),
          "expression(" + std::string(text) + ")"};
}

BoundaryFunction linear_combination(double a, const BoundaryFunction& f, double b,
                                    const BoundaryFunction& g) {
  if (std::abs(f.period() - g.period()) > 1e-12 * f.period())
    throw Error(ErrorCode::BadParams, "linear_combination needs a common period");

  std::vector<SingularityAnnotation> merged;
  auto absorb = [&](const BoundaryFunction& h) {
    for (const auto& s : h.singularities()) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) {
        return f.distance(m.position, s.position) <= f.coincidence_tolerance();
      });
      if (it == merged.end()) {
        merged.push_back(s);
      } else {
        bool diverges = it->diverges || s.diverges;
        if (severity(s) > severity(*it)) *it = s;
        it->diverges = diverges && it->kind != SingularityKind::Jump;
      }
    }
  };
  if (a != 0.0) absorb(f);
  if (b != 0.0) absorb(g);

  return {[a, b, f, g](double t) {
            double r = 0.0;
            if (a != 0.0) r += a * f.raw(t);
            if (b != 0.0) r += b * g.raw(t);
            return r;
          },
          f.period(), std::move(merged),
          std::to_string(a) + "*" + f.description() + " + " + std::to_string(b) + "*" +
              g.description()};
}

BoundaryFunction rescale_period(const BoundaryFunction& f, double new_period) {
  if (!(new_period > 0.0) || !std::isfinite(new_period))
    throw Error(ErrorCode::BadParams, "period must be positive and finite");
  double scale = f.period() / new_period;
  std::vector<SingularityAnnotation> moved(f.singularities().begin(), f.singularities().end());
  for (auto& s : moved) s.position /= scale;
  return {[f, scale](double t) { return f.raw(t * scale); }, new_period, std::move(moved),
          f.description()};
}

}  // namespace dirichlet
