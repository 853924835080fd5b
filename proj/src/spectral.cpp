#include "dirichlet/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <unsupported/Eigen/FFT>

#include "dirichlet/error.hpp"

namespace dirichlet {

namespace {

using cplx = std::complex<double>;

void require_circle(const BoundaryFunction& f) {
  if (std::abs(f.period() - kTwoPi) > 1e-12 * kTwoPi)
    throw Error(ErrorCode::BadParams, "spectral operations need a function on the unit circle (period 2*pi)");
}

// Adds v * exp(-i k theta) to acc[k] for k = 0..K, resynchronizing the
// rotating phasor periodically to keep phase drift at rounding level.
void accumulate_phasor(Eigen::VectorXcd& acc, double theta, cplx v) {
  const Eigen::Index n = acc.size();
  const cplx step = std::polar(1.0, -theta);
  cplx phasor = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if ((k & 1023) == 0) phasor = std::polar(1.0, -theta * static_cast<double>(k));
    acc(k) += v * phasor;
    phasor *= step;
  }
}

struct FourierPass {
  Eigen::VectorXcd integrals;  // int f exp(-i k t) dt, k = 0..K
  double magnitude = 0.0;      // int |f|
};

FourierPass fourier_pass(const BoundaryFunction& f, int harmonics, long panels,
                         const QuadratureConfig& config) {
  const double h = kTwoPi / static_cast<double>(panels);
  const QuadratureRule& rule = gauss_legendre_15();

  struct Mark {
    double position;
    bool diverges;
  };
  std::vector<Mark> marks;
  for (const auto& s : f.singularities()) marks.push_back({s.position, s.diverges});

  // Panels touching an annotated point are excluded from the uniform sum.
  std::vector<char> irregular(static_cast<std::size_t>(panels), 0);
  auto flag = [&](long p) { irregular[static_cast<std::size_t>(((p % panels) + panels) % panels)] = 1; };
  for (const Mark& m : marks) {
    const double x = m.position / h;
    const long nearest = std::lround(x);
    if (std::abs(x - static_cast<double>(nearest)) < 1e-9) {
      if (m.diverges) {
        flag(nearest - 1);
        flag(nearest);
      }
    } else {
      const long p = static_cast<long>(std::floor(x));
      flag(p);
      if (m.diverges) {
        flag(p - 1);
        flag(p + 1);
      }
    }
  }

  FourierPass pass;
  pass.integrals = Eigen::VectorXcd::Zero(harmonics + 1);

  // Uniform part: for each node position q, sum over panels with one FFT.
  Eigen::FFT<double> fft;
  std::vector<cplx> samples(static_cast<std::size_t>(panels));
  std::vector<cplx> spectrum;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double offset = h * rule.nodes[q];
    const double weight = h * rule.weights[q];
    for (long p = 0; p < panels; ++p) {
      auto idx = static_cast<std::size_t>(p);
      if (irregular[idx]) {
        samples[idx] = 0.0;
        continue;
      }
      const double v = weight * f.raw(static_cast<double>(p) * h + offset);
      if (!std::isfinite(v))
        throw Error(ErrorCode::QuadratureFailure,
                    f.description() + " is not finite at " + std::to_string(static_cast<double>(p) * h + offset));
      samples[idx] = v;
      pass.magnitude += std::abs(v);
    }
    fft.fwd(spectrum, samples);
    for (int k = 0; k <= harmonics; ++k) {
      const cplx shift = std::polar(1.0, -static_cast<double>(k) * offset);
      pass.integrals(k) += shift * spectrum[static_cast<std::size_t>(k % panels)];
    }
  }

  // Irregular groups: maximal runs of flagged panels, integrated adaptively
  // with breakpoints at the annotated points they contain.
  long start = 0;
  while (start < panels && irregular[static_cast<std::size_t>(start)]) ++start;
  if (start == panels) start = 0;  // every panel flagged: treat the circle as one group
  for (long step = 0; step < panels;) {
    const long p = (start + step) % panels;
    if (!irregular[static_cast<std::size_t>(p)]) {
      ++step;
      continue;
    }
    long count = 0;
    while (step + count < panels && irregular[static_cast<std::size_t>((start + step + count) % panels)]) ++count;
    const double a = static_cast<double>(start + step) * h;
    const double b = a + static_cast<double>(count) * h;
    step += count;

    struct Break {
      double position;
      bool singular;
    };
    std::vector<Break> cuts{{a, false}, {b, false}};
    for (const Mark& m : marks) {
      for (double shift : {-kTwoPi, 0.0, kTwoPi, 2 * kTwoPi}) {
        const double x = m.position + shift;
        const double tol = 1e-9 * h;
        if (std::abs(x - a) <= tol) {
          cuts.front().singular = cuts.front().singular || m.diverges;
        } else if (std::abs(x - b) <= tol) {
          cuts.back().singular = cuts.back().singular || m.diverges;
        } else if (x > a && x < b) {
          cuts.push_back({x, m.diverges});
        }
      }
    }
    std::sort(cuts.begin(), cuts.end(), [](const Break& x, const Break& y) { return x.position < y.position; });

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Segment seg{cuts[i].position, cuts[i + 1].position, cuts[i].singular, cuts[i + 1].singular};
      auto raw = [&f](double t) { return f.raw(t); };
      auto mesh = integrate_adaptive<double>(raw, seg, config, h);
      pass.magnitude += mesh.magnitude;
      for (const Panel& panel : mesh.panels) {
        const double w = panel.b - panel.a;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double t = panel.a + w * rule.nodes[q];
          accumulate_phasor(pass.integrals, t, w * rule.weights[q] * f.raw(t));
        }
      }
      if (seg.singular_left) accumulate_phasor(pass.integrals, seg.a, mesh.tail_left);
      if (seg.singular_right) accumulate_phasor(pass.integrals, seg.b, mesh.tail_right);
    }
  }
  return pass;
}

}  // namespace

FourierCoefficients compute_fourier(const BoundaryFunction& f, int harmonics,
                                    const QuadratureConfig& config) {
  config.validate();
  if (harmonics < 1) throw Error(ErrorCode::BadParams, "harmonic count must be at least 1");
  require_circle(f);
  if (!f.integrable())
    throw Error(ErrorCode::NotIntegrable, f.description() + " has a non-integrable hard singularity");

  const long initial = std::max<long>(64, static_cast<long>(std::bit_ceil(static_cast<unsigned long>(harmonics))));
  const long limit = std::max<long>(initial * 64, 1L << 16);

  long panels = initial;
  FourierPass coarse = fourier_pass(f, harmonics, panels, config);
  for (;;) {
    if (2 * panels > limit)
      throw Error(ErrorCode::QuadratureFailure,
                  "Fourier coefficients of " + f.description() + " did not converge");
    FourierPass fine = fourier_pass(f, harmonics, 2 * panels, config);
    const double change = (fine.integrals - coarse.integrals).cwiseAbs().maxCoeff();
    const double target = config.rel_tol * fine.magnitude;
    coarse = std::move(fine);
    panels *= 2;
    if (change <= target) break;
  }

  FourierCoefficients out;
  const double inv_pi = 1.0 / std::numbers::pi;
  out.alpha0 = coarse.integrals(0).real() * inv_pi;
  out.alpha.resize(harmonics);
  out.beta.resize(harmonics);
  for (int k = 1; k <= harmonics; ++k) {
    out.alpha(k - 1) = coarse.integrals(k).real() * inv_pi;
    out.beta(k - 1) = -coarse.integrals(k).imag() * inv_pi;
  }
  return out;
}

TaylorCoefficients to_taylor(const FourierCoefficients& fourier) {
  const int n = fourier.harmonics();
  TaylorCoefficients out;
  out.c.resize(n + 1);
  out.c(0) = cplx(fourier.alpha0 / 2.0, 0.0);
  for (int k = 1; k <= n; ++k) out.c(k) = cplx(fourier.alpha(k - 1), -fourier.beta(k - 1));
  return out;
}

namespace {

// Sectional primitive over the open arcs between consecutive non-integrable
// points. Each arc ("piece") carries a cumulative integral on the panel nodes
// of an adaptive mesh of f; evaluation adds one Gauss-Legendre panel.
class SectionalPrimitive {
 public:
  SectionalPrimitive(const BoundaryFunction& f, std::span<const SectionalInterval> intervals,
                     const QuadratureConfig& config);

  double operator()(double t) const;
  double closure() const noexcept { return closure_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  struct Piece {
    double start = 0.0;
    double end = 0.0;
    bool start_singular = false;
    bool end_singular = false;
    std::vector<double> nodes;
    std::vector<double> cumulative;
    std::vector<char> gap_after;  // nodes[j]..nodes[j+1] straddles an interior divergence
    double reference = 0.0;
    double reference_value = 0.0;
    double constant = 0.0;
  };

  double integral_value(const Piece& piece, double t) const;
  double piece_value(const Piece& piece, double t) const {
    return integral_value(piece, t) - piece.reference_value + piece.constant;
  }
  std::size_t locate(double t, double& unwrapped) const;

  BoundaryFunction f_;
  QuadratureConfig config_;
  double period_;
  std::vector<double> breaks_;
  std::vector<Piece> pieces_;
  double closure_ = 0.0;
  double magnitude_ = 0.0;
};

SectionalPrimitive::SectionalPrimitive(const BoundaryFunction& f,
                                       std::span<const SectionalInterval> intervals,
                                       const QuadratureConfig& config)
    : f_(f), config_(config), period_(f.period()) {
  config_.validate();
  if (intervals.empty()) throw Error(ErrorCode::BadParams, "piecewise_primitive needs at least one interval");

  for (const auto& s : f.singularities())
    if (!s.integrable()) breaks_.push_back(s.position);
  std::sort(breaks_.begin(), breaks_.end());

  for (const auto& iv : intervals) {
    if (!(iv.left < iv.right) || iv.reference < iv.left || iv.reference > iv.right || iv.exclusion < 0.0 ||
        iv.right - iv.left > period_ * (1.0 + 1e-12))
      throw Error(ErrorCode::BadParams, "malformed sectional interval");
    for (double s : breaks_) {
      for (double shift : {-period_, 0.0, period_, 2 * period_}) {
        const double x = s + shift;
        if (x >= iv.left - f.coincidence_tolerance() && x <= iv.right + f.coincidence_tolerance())
          throw Error(ErrorCode::IntervalContainsNonIntegrableSingularity,
                      "interval [" + std::to_string(iv.left) + ", " + std::to_string(iv.right) +
                          "] contains the non-integrable point " + std::to_string(s));
      }
    }
  }

  // Arcs between breaks; a single seam-cut arc when f is integrable.
  if (breaks_.empty()) {
    const double seam = f.canonical(intervals.front().left);
    pieces_.push_back(Piece{seam, seam + period_, false, false, {}, {}, {}, 0.0, 0.0, 0.0});
  } else {
    for (std::size_t j = 0; j < breaks_.size(); ++j) {
      const double a = breaks_[j];
      const double b = j + 1 < breaks_.size() ? breaks_[j + 1] : breaks_.front() + period_;
      pieces_.push_back(Piece{a, b, true, true, {}, {}, {}, 0.0, 0.0, 0.0});
    }
  }

  // Reference of each arc: that of the first interval lying in it.
  std::vector<int> owner(pieces_.size(), -1);
  std::vector<double> exclusion(pieces_.size(), 0.0);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    double unwrapped = 0.0;
    const std::size_t p = locate(0.5 * (intervals[i].left + intervals[i].right), unwrapped);
    exclusion[p] = std::max(exclusion[p], intervals[i].exclusion);
    if (owner[p] >= 0) continue;
    owner[p] = static_cast<int>(i);
    double ref = unwrapped + (intervals[i].reference - 0.5 * (intervals[i].left + intervals[i].right));
    pieces_[p].reference = ref;
  }
  for (int o : owner)
    if (o < 0) throw Error(ErrorCode::BadParams, "every section between singular points needs an interval");

  // Adaptive meshes and cumulative integrals.
  struct Mark {
    double position;
    bool diverges;
  };
  for (Piece& piece : pieces_) {
    // Non-integrable ends are approached through dyadic shells, each
    // integrated to its own tolerance, down to a fraction of the exclusion.
    std::vector<Mark> cuts;
    const double length = piece.end - piece.start;
    if (breaks_.empty()) {
      cuts = {{piece.start, false}, {piece.end, false}};
    } else {
      double nearest = exclusion[static_cast<std::size_t>(&piece - pieces_.data())];
      if (!(nearest > 0.0)) nearest = 1e-6 * period_;
      nearest = std::min(nearest, 0.25 * length) / 64.0;
      for (double d = 0.5 * length; d > nearest; d *= 0.5) {
        cuts.push_back({piece.start + d, false});
        if (d < 0.5 * length) cuts.push_back({piece.end - d, false});
      }
      cuts.push_back({piece.start + nearest, false});
      cuts.push_back({piece.end - nearest, false});
    }
    for (const auto& s : f.singularities()) {
      if (!s.integrable()) continue;
      for (double shift : {-period_, 0.0, period_}) {
        const double x = s.position + shift;
        if (x > piece.start + f.coincidence_tolerance() && x < piece.end - f.coincidence_tolerance())
          cuts.push_back({x, s.diverges});
      }
    }
    std::sort(cuts.begin(), cuts.end(), [](const Mark& a, const Mark& b) { return a.position < b.position; });
    std::vector<Mark> merged;
    for (const Mark& m : cuts) {
      if (!merged.empty() && m.position - merged.back().position <= f.coincidence_tolerance()) {
        merged.back().diverges = merged.back().diverges || m.diverges;
      } else {
        merged.push_back(m);
      }
    }
    cuts.swap(merged);

    double running = 0.0;
    double pending_tail = 0.0;
    auto raw = [this](double t) { return f_.raw(t); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Segment seg{cuts[i].position, cuts[i + 1].position, cuts[i].diverges, cuts[i + 1].diverges};
      auto mesh = integrate_adaptive<double>(raw, seg, config_);
      magnitude_ += mesh.magnitude;
      if (i > 0) running += pending_tail + mesh.tail_left;
      for (const Panel& panel : mesh.panels) {
        if (piece.nodes.empty() || panel.a != piece.nodes.back()) {
          if (!piece.nodes.empty()) piece.gap_after.push_back(1);
          piece.nodes.push_back(panel.a);
          piece.cumulative.push_back(running);
        }
        double m = 0.0;
        running += detail::gl15<double>(raw, panel.a, panel.b, m);
        piece.gap_after.push_back(0);
        piece.nodes.push_back(panel.b);
        piece.cumulative.push_back(running);
      }
      pending_tail = mesh.tail_right;
    }
    piece.reference_value = integral_value(piece, piece.reference);
  }

  // Constants across breaks: fit the symmetric jump J(e) = F(s+e) - F(s-e)
  // to J0 + a/e + b*e and cancel J0; the last break keeps the closure jump.
  if (breaks_.empty()) {
    const Piece& piece = pieces_.front();
    closure_ = piece.cumulative.back() - piece.cumulative.front();
    return;
  }
  const std::size_t n = pieces_.size();
  const std::size_t first = static_cast<std::size_t>(
      std::find_if(owner.begin(), owner.end(), [](int o) { return o == 0; }) - owner.begin());
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t left = (first + step) % n;
    const std::size_t right = (left + 1) % n;
    double eps = std::max(exclusion[left], exclusion[right]);
    if (!(eps > 0.0)) eps = 1e-6 * period_;
    eps = std::min(eps, 0.25 * std::min(pieces_[left].end - pieces_[left].start,
                                        pieces_[right].end - pieces_[right].start));
    Eigen::Matrix3d basis;
    Eigen::Vector3d jumps;
    for (int r = 0; r < 3; ++r) {
      const double e = eps / static_cast<double>(1 << r);
      const double after = piece_value(pieces_[right], pieces_[right].start + e);
      const double before = piece_value(pieces_[left], pieces_[left].end - e);
      basis(r, 0) = 1.0;
      basis(r, 1) = eps / e;
      basis(r, 2) = e / eps;
      jumps(r) = after - before;
    }
    const double j0 = basis.colPivHouseholderQr().solve(jumps)(0);
    if (step + 1 == n) {
      closure_ = -j0;
    } else {
      pieces_[right].constant -= j0;
    }
  }
}

std::size_t SectionalPrimitive::locate(double t, double& unwrapped) const {
  const double c = f_.canonical(t);
  if (breaks_.empty()) {
    const Piece& piece = pieces_.front();
    unwrapped = c >= piece.start ? c : c + period_;
    return 0;
  }
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    for (double shift : {0.0, period_}) {
      const double x = c + shift;
      if (x > pieces_[j].start && x < pieces_[j].end) {
        unwrapped = x;
        return j;
      }
    }
  }
  // Exactly on a break: approach from the arc that starts there.
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    if (std::abs(pieces_[j].start - c) <= f_.coincidence_tolerance()) {
      unwrapped = pieces_[j].start;
      return j;
    }
  }
  unwrapped = pieces_.front().start;
  return 0;
}

double SectionalPrimitive::integral_value(const Piece& piece, double t) const {
  auto raw = [this](double x) { return f_.raw(x); };
  const auto& nodes = piece.nodes;
  if (t <= nodes.front()) {
    if (t == nodes.front()) return piece.cumulative.front();
    return piece.cumulative.front() - integrate(raw, Segment{t, nodes.front(), true, false}, config_);
  }
  if (t >= nodes.back()) {
    if (t == nodes.back()) return piece.cumulative.back();
    return piece.cumulative.back() + integrate(raw, Segment{nodes.back(), t, false, true}, config_);
  }
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  const auto j = static_cast<std::size_t>(it - nodes.begin()) - 1;
  if (piece.gap_after[j]) {
    // Inside the excluded neighbourhood of an integrable divergence.
    const double mid = 0.5 * (nodes[j] + nodes[j + 1]);
    if (t <= mid)
      return piece.cumulative[j] + integrate(raw, Segment{nodes[j], t, false, true}, config_);
    return piece.cumulative[j + 1] - integrate(raw, Segment{t, nodes[j + 1], true, false}, config_);
  }
  double m = 0.0;
  if (t == nodes[j]) return piece.cumulative[j];
  return piece.cumulative[j] + detail::gl15<double>(raw, nodes[j], t, m);
}

double SectionalPrimitive::operator()(double t) const {
  double unwrapped = 0.0;
  const std::size_t p = locate(t, unwrapped);
  return piece_value(pieces_[p], unwrapped);
}

SingularityAnnotation integrated(const SingularityAnnotation& s) {
  switch (s.kind) {
    case SingularityKind::Hard:
      if (!s.degree) return SingularityAnnotation::hard(s.position, std::nullopt, true);
      if (*s.degree >= 2) return SingularityAnnotation::hard(s.position, *s.degree - 1, true);
      return SingularityAnnotation::borderline(s.position, true);
    case SingularityKind::BorderlineHard:
    case SingularityKind::Jump:
    case SingularityKind::Soft:
      return SingularityAnnotation::soft(s.position);
  }
  return SingularityAnnotation::soft(s.position);
}

BoundaryFunction as_function(const BoundaryFunction& f, std::shared_ptr<const SectionalPrimitive> prim,
                             double seam) {
  std::vector<SingularityAnnotation> marks;
  for (const auto& s : f.singularities()) marks.push_back(integrated(s));
  if (f.integrable() && std::abs(prim->closure()) > 1e-12 * std::max(1.0, prim->magnitude())) {
    auto it = std::find_if(marks.begin(), marks.end(), [&](const auto& m) {
      return f.distance(m.position, seam) <= f.coincidence_tolerance();
    });
    if (it == marks.end()) {
      marks.push_back(SingularityAnnotation::jump(seam));
    } else {
      *it = SingularityAnnotation::jump(it->position);
    }
  }
  return {[prim](double t) { return (*prim)(t); }, f.period(), std::move(marks),
          "primitive(" + f.description() + ")"};
}

}  // namespace

std::vector<SectionalInterval> default_sections(const BoundaryFunction& f, double exclusion_fraction) {
  std::vector<double> breaks;
  for (const auto& s : f.singularities())
    if (!s.integrable()) breaks.push_back(s.position);
  std::sort(breaks.begin(), breaks.end());
  const double period = f.period();
  if (breaks.empty()) return {SectionalInterval{0.0, period, 0.0, 0.0}};

  const double eps = exclusion_fraction * period;
  std::vector<SectionalInterval> out;
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    const double a = breaks[j];
    const double b = j + 1 < breaks.size() ? breaks[j + 1] : breaks.front() + period;
    const double e = std::min(eps, 0.25 * (b - a));
    out.push_back({a + e, b - e, 0.5 * (a + b), e});
  }
  return out;
}

BoundaryFunction piecewise_primitive(const BoundaryFunction& f,
                                     std::span<const SectionalInterval> intervals,
                                     const QuadratureConfig& config) {
  auto prim = std::make_shared<const SectionalPrimitive>(f, intervals, config);
  return as_function(f, prim, intervals.empty() ? 0.0 : f.canonical(intervals.front().left));
}

TaylorCoefficients nonintegrable_taylor(const BoundaryFunction& f, int harmonics,
                                        const QuadratureConfig& config) {
  config.validate();
  if (harmonics < 1) throw Error(ErrorCode::BadParams, "harmonic count must be at least 1");
  require_circle(f);
  const int depth = f.max_hardness();
  if (depth < 0)
    throw Error(ErrorCode::NotLocallyIntegrable,
                f.description() + " has a hard singularity without a finite degree");
  if (depth == 0) return to_taylor(compute_fourier(f, harmonics, config));

  BoundaryFunction current = f;
  double mean = 0.0;
  for (int stage = 1; stage <= depth; ++stage) {
    const auto sections = default_sections(current);
    auto prim = std::make_shared<const SectionalPrimitive>(current, sections, config);
    const double shift = prim->closure() / current.period();
    if (stage == 1) mean = shift;
    if (std::abs(prim->closure()) > 1e-14 * std::max(1.0, prim->magnitude())) {
      // Remove the finite-part mean so the primitive closes up around the circle.
      const double constant[] = {shift};
      BoundaryFunction shifted = linear_combination(1.0, current, -1.0, builtin("constant", constant));
      prim = std::make_shared<const SectionalPrimitive>(shifted, sections, config);
    }
    current = as_function(current, prim, 0.0);
  }

  TaylorCoefficients out = to_taylor(compute_fourier(current, harmonics, config));
  for (int k = 1; k <= harmonics; ++k) {
    cplx c = out.c(k);
    for (int r = 0; r < depth; ++r) c = cplx(-static_cast<double>(k) * c.imag(), static_cast<double>(k) * c.real());
    out.c(k) = c;
  }
  out.c(0) = mean;
  return out;
}

}  // namespace dirichlet
