#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirichlet {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class SingularityKind { Jump, Soft, BorderlineHard, Hard };

const char* to_string(SingularityKind kind);

/// A marked point of a boundary function.
///
/// `degree` is the degree of hardness: 0 for borderline-hard points, n >= 1 for
/// non-integrable hard points. A hard point whose degree is not finite is
/// represented by an empty `degree`; such functions are not locally
/// integrable almost everywhere and are rejected by the spectral pipeline.
struct SingularityAnnotation {
  double position = 0.0;
  SingularityKind kind = SingularityKind::Soft;
  std::optional<int> degree;
  bool diverges = false;

  static SingularityAnnotation jump(double position);
  static SingularityAnnotation soft(double position);
  static SingularityAnnotation borderline(double position, bool diverges = true);
  static SingularityAnnotation hard(double position, std::optional<int> degree, bool diverges = true);

  /// True for jump, soft and borderline-hard points.
  bool integrable() const noexcept;
  /// Degree of hardness for non-integrable points, 0 otherwise; -1 if unknown.
  int hardness() const noexcept;
};

/// Real function on a closed curve parametrized over [0, period).
///
/// Immutable after construction; the evaluator is shared between copies and
/// must be safe to call concurrently.
class BoundaryFunction {
 public:
  using Evaluator = std::function<double(double)>;

  BoundaryFunction(Evaluator evaluator, double period,
                   std::vector<SingularityAnnotation> singularities, std::string description);

  /// Evaluates at `t` (canonicalized modulo the period). Throws
  /// EvalAtSingularity when `t` coincides with a diverging annotation.
  double operator()(double t) const;

  /// Evaluates without the singularity guard; quadrature rules use this to
  /// sample arbitrarily close to integrable divergences.
  double raw(double t) const { return (*evaluator_)(canonical(t)); }

  double period() const noexcept { return period_; }
  std::span<const SingularityAnnotation> singularities() const noexcept { return singularities_; }
  const std::string& description() const noexcept { return description_; }

  double canonical(double t) const noexcept;
  /// Circular distance between two parameter values.
  double distance(double s, double t) const noexcept;

  /// Largest degree of hardness over all annotations; -1 if some degree is unknown.
  int max_hardness() const noexcept;
  bool integrable() const noexcept;

  /// Copy with a different label and annotation list.
  BoundaryFunction with_annotations(std::vector<SingularityAnnotation> singularities,
                                    std::string description) const;

  /// Coincidence tolerance used by the singularity guard.
  double coincidence_tolerance() const noexcept { return 1e-12 * period_; }

 private:
  std::shared_ptr<const Evaluator> evaluator_;
  double period_;
  std::vector<SingularityAnnotation> singularities_;
  std::string description_;
};

double sample(const BoundaryFunction& f, double t);

/// Built-in catalog on the unit circle (period 2*pi).
///
///   constant      [value]
///   cosine        [amplitude = 1, harmonic = 1]
///   sine          [amplitude = 1, harmonic = 1]
///   square_wave   []            +1 on (0, pi), -1 on (pi, 2 pi); jumps at 0, pi
///   sawtooth      []            (pi - t) / 2 on (0, 2 pi); jump at 0
///   log_sine      []            ln|sin(t / 2)|; borderline-hard at 0
///   half_cot      []            cot(t / 2) / 2; hard of degree 1 at 0
///
/// "expression" is part of the catalog but needs text; use expression().
BoundaryFunction builtin(std::string_view name, std::span<const double> params = {});

BoundaryFunction expression(std::string_view text, double period,
                            std::vector<SingularityAnnotation> singularities);

/// a*f + b*g on a common period, annotations merged.
BoundaryFunction linear_combination(double a, const BoundaryFunction& f, double b,
                                    const BoundaryFunction& g);

/// f(t * f.period() / new_period), so a function on the circle becomes a
/// function of arc length on a curve of total length `new_period`.
BoundaryFunction rescale_period(const BoundaryFunction& f, double new_period);

}  // namespace dirichlet
