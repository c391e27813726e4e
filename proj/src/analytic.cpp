#include <nbscope/analytic.hpp>

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nbscope {

using detail::reject;

namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;  // 2^-53
// Per-operation relative error allowance for a complex multiply.
constexpr double kMulErr = 4 * kUnit;

}  // namespace

Index truncation_length(double bound, double r, double tol) {
  if (!(r > 0.0 && r < 1.0)) reject("truncation_length: radius must lie in (0, 1), got ", r);
  if (!(tol > 0.0)) reject("truncation_length: tol must be > 0");
  if (!(bound >= 0.0)) reject("truncation_length: bound must be >= 0");
  if (bound == 0.0 || tol >= bound / (1.0 - r)) return 0;
  const long double A = bound, R = r, T = tol;
  auto tail = [&](long double n) { return A * std::pow(R, n) / (1.0L - R); };
  const long double guess = std::ceil(std::log(T * (1.0L - R) / A) / std::log(R));
  if (guess > 1e15L) return std::numeric_limits<Index>::max() / 4;
  auto n = static_cast<Index>(std::max(guess, 0.0L));
  while (tail(static_cast<long double>(n)) > T) ++n;
  while (n > 0 && tail(static_cast<long double>(n - 1)) <= T) --n;
  return n;
}

EvalResult eval_partial(const OneSidedSequence& seq, Index first, Index terms, Complex z) {
  if (terms < 0 || first < 0) reject("eval_partial: negative range");
  if (terms > 0) seq.require_extent(first + terms - 1, "evaluation");
  detail::CompensatedSum sum;
  Complex power{1.0, 0.0};
  double weighted_abs = 0.0;  // sum (k + 2) |a| |z|^k
  double abs_sum = 0.0;
  const double rz = std::abs(z);
  double rpow = 1.0;
  for (Index k = 0; k < terms; ++k) {
    const Complex a = seq(first + k);
    const Complex t = a * power;
    sum.add(t);
    const double mag = std::abs(a) * rpow;
    abs_sum += mag;
    weighted_abs += static_cast<double>(k + 2) * mag;
    power *= z;
    rpow *= rz;
  }
  EvalResult out;
  out.value = sum.value();
  out.terms_used = terms;
  out.truncation_bound = 0.0;
  out.abs_error_bound = 1.01 * kMulErr * weighted_abs + 2 * kUnit * std::abs(out.value) +
                        4 * kUnit * kUnit * static_cast<double>(terms) * abs_sum;
  return out;
}

EvalResult eval_f(const OneSidedSequence& seq, Complex z, double tol) {
  const double rz = std::abs(z);
  if (!(rz <= 1.0 - 1e-9)) reject("eval_f: |z| = ", rz, " is not <= 1 - 1e-9");
  if (!(tol > 0.0)) reject("eval_f: tol must be > 0");
  const double A = seq.bound();
  Index N = 0;
  if (rz == 0.0) {
    N = A <= tol ? 0 : 1;
  } else {
    N = truncation_length(A, rz, tol);
  }
  if (N > kMaxTerms) {
    throw NumericCapError("eval_f: |z| = " + std::to_string(rz) + " at tol " + std::to_string(tol) +
                          " requires " + std::to_string(N) + " terms (cap " +
                          std::to_string(kMaxTerms) + ")");
  }
  EvalResult out = eval_partial(seq, 0, N, z);
  out.truncation_bound = rz == 0.0 ? (N == 0 ? A : 0.0) : A * std::pow(rz, static_cast<double>(N)) / (1.0 - rz);
  out.abs_error_bound += out.truncation_bound;
  return out;
}

ShiftPair eval_shift_pair(const OneSidedSequence& seq, Index N, Complex z, double tol) {
  if (N < 0) reject("eval_shift_pair: N must be >= 0");
  if (z == Complex{0.0}) reject("eval_shift_pair: z = 0 is excluded");
  const double rz = std::abs(z);
  if (!(rz < 1.0)) reject("eval_shift_pair: f_+ needs |z| < 1");
  if (!(tol > 0.0)) reject("eval_shift_pair: tol must be > 0");
  const double A = seq.bound();
  const Index T = truncation_length(A, rz, tol);
  if (N + T > kMaxTerms) throw NumericCapError("eval_shift_pair: term cap exceeded");
  const double tail = A * std::pow(rz, static_cast<double>(T)) / (1.0 - rz);

  ShiftPair out;
  out.plus = eval_partial(seq, N, T, z);
  out.plus.truncation_bound = tail;
  out.plus.abs_error_bound += tail;

  // f_-^{(N)}(z) = sum_{j=1}^{N} a_{N-j} w^j with w = 1/z.
  const Complex w = 1.0 / z;
  detail::CompensatedSum minus;
  Complex wpow = w;
  double weighted = 0.0;
  double rw = std::abs(w), rwpow = rw;
  for (Index j = 1; j <= N; ++j) {
    const Complex a = seq(N - j);
    minus.add(a * wpow);
    weighted += static_cast<double>(j + 2) * std::abs(a) * rwpow;
    wpow *= w;
    rwpow *= rw;
  }
  out.minus.value = minus.value();
  out.minus.terms_used = N;
  out.minus.abs_error_bound = 1.01 * kMulErr * weighted + 2 * kUnit * std::abs(out.minus.value);

  // z^{-N} f(z) with f summed to exactly N + T terms, so both tails coincide.
  EvalResult f = eval_partial(seq, 0, N + T, z);
  Complex scale{1.0, 0.0};
  for (Index j = 0; j < N; ++j) scale *= w;
  const double scale_abs = std::pow(rw, static_cast<double>(N));
  out.scaled.value = scale * f.value;
  out.scaled.terms_used = N + T;
  out.scaled.truncation_bound = tail;
  out.scaled.abs_error_bound = scale_abs * f.abs_error_bound +
                               1.01 * kMulErr * static_cast<double>(N + 2) * scale_abs *
                                   std::abs(f.value) +
                               tail;

  const Complex residual = out.plus.value + out.minus.value - out.scaled.value;
  out.identity_residual = std::abs(residual);
  out.combined_error_bound =
      out.plus.abs_error_bound + out.minus.abs_error_bound + out.scaled.abs_error_bound +
      3 * kUnit * (std::abs(out.plus.value) + std::abs(out.minus.value) + std::abs(out.scaled.value));
  return out;
}

namespace {

struct RationalComplex {
  Rational re{0}, im{0};
  RationalComplex operator+(const RationalComplex& o) const { return {re + o.re, im + o.im}; }
  RationalComplex operator-(const RationalComplex& o) const { return {re - o.re, im - o.im}; }
  RationalComplex operator*(const RationalComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
};

}  // namespace

ExactShiftPair eval_shift_pair_exact(const OneSidedSequence& seq, Index N, const Rational& z_re,
                                     const Rational& z_im, Index terms) {
  if (!seq.is_exact()) reject("eval_shift_pair_exact: sequence values are not exact");
  if (N < 0 || terms < 0) reject("eval_shift_pair_exact: N and terms must be >= 0");
  const Rational norm = z_re * z_re + z_im * z_im;
  if (norm == 0) reject("eval_shift_pair_exact: z = 0 is excluded");
  seq.require_extent(N + terms - 1, "exact shift identity");
  const RationalComplex z{z_re, z_im};
  const RationalComplex w{z_re / norm, -z_im / norm};
  auto coeff = [&](Index n) {
    const Complex a = seq(n);
    return RationalComplex{to_rational(a.real()), to_rational(a.imag())};
  };

  RationalComplex plus, f, power{Rational(1), Rational(0)};
  for (Index k = 0; k < N + terms; ++k) {
    const RationalComplex t = coeff(k) * power;
    f = f + t;
    power = power * z;
  }
  power = RationalComplex{Rational(1), Rational(0)};
  for (Index k = 0; k < terms; ++k) {
    plus = plus + coeff(N + k) * power;
    power = power * z;
  }
  RationalComplex minus, wpow = w;
  for (Index j = 1; j <= N; ++j) {
    minus = minus + coeff(N - j) * wpow;
    wpow = wpow * w;
  }
  RationalComplex scale{Rational(1), Rational(0)};
  for (Index j = 0; j < N; ++j) scale = scale * w;
  const RationalComplex scaled = scale * f;
  const RationalComplex residual = plus + minus - scaled;

  ExactShiftPair out;
  out.plus_re = plus.re;
  out.plus_im = plus.im;
  out.minus_re = minus.re;
  out.minus_im = minus.im;
  out.scaled_re = scaled.re;
  out.scaled_im = scaled.im;
  out.residual_re = residual.re;
  out.residual_im = residual.im;
  out.terms = terms;
  return out;
}

// ---------------------------------------------------------------------------

TwoSidedSequence TwoSidedSequence::zero_padded(const TwoSidedWindow& w) {
  if (w.values.size() != static_cast<std::size_t>(2 * w.radius + 1)) {
    reject("two-sided window must hold 2W+1 values");
  }
  double bound = 0.0;
  for (const Complex& v : w.values) bound = std::max(bound, std::abs(v));
  TwoSidedSequence b;
  b.eval = [values = w.values, radius = w.radius](Index n) {
    return (n < -radius || n > radius) ? Complex{0.0} : values[static_cast<std::size_t>(n + radius)];
  };
  b.bound = bound;
  b.min_index = -w.radius;
  b.max_index = w.radius;
  return b;
}

TwoSidedSequence TwoSidedSequence::periodic(std::vector<Complex> pattern) {
  if (pattern.empty()) reject("periodic two-sided sequence needs a nonempty pattern");
  double bound = 0.0;
  for (const Complex& v : pattern) bound = std::max(bound, std::abs(v));
  TwoSidedSequence b;
  const auto p = static_cast<Index>(pattern.size());
  b.eval = [pattern = std::move(pattern), p](Index n) {
    return pattern[static_cast<std::size_t>(((n % p) + p) % p)];
  };
  b.bound = bound;
  return b;
}

TwoSidedSequence TwoSidedSequence::from_function(std::function<Complex(Index)> eval, double bound) {
  TwoSidedSequence b;
  b.eval = std::move(eval);
  b.bound = bound;
  return b;
}

EvalResult eval_two_sided(const TwoSidedSequence& b, Complex z, double tol) {
  if (!b.eval) reject("two-sided sequence has no evaluator");
  if (!(tol > 0.0)) reject("eval_two_sided: tol must be > 0");
  const double rz = std::abs(z);
  if (std::abs(rz - 1.0) <= 1e-12) reject("eval_two_sided: |z| = 1 is on the boundary");
  const double A = b.bound;
  EvalResult out;
  detail::CompensatedSum sum;
  double weighted = 0.0;

  if (rz < 1.0) {
    Index terms = 0;
    if (b.max_index) {
      terms = std::max<Index>(*b.max_index + 1, 0);
      out.truncation_bound = 0.0;
    } else if (rz == 0.0) {
      terms = 1;
    } else {
      terms = truncation_length(A, rz, tol);
      if (terms > kMaxTerms) throw NumericCapError("eval_two_sided: term cap exceeded inside");
      out.truncation_bound = A * std::pow(rz, static_cast<double>(terms)) / (1.0 - rz);
    }
    Complex power{1.0, 0.0};
    double rpow = 1.0;
    for (Index n = 0; n < terms; ++n) {
      const Complex v = b.eval(n);
      sum.add(v * power);
      weighted += static_cast<double>(n + 2) * std::abs(v) * rpow;
      power *= z;
      rpow *= rz;
    }
    out.terms_used = terms;
  } else {
    const Complex w = 1.0 / z;
    const double rw = 1.0 / rz;
    Index terms = 0;  // k = 1..terms
    if (b.min_index) {
      terms = std::max<Index>(-*b.min_index, 0);
      out.truncation_bound = 0.0;
    } else {
      const Index n = truncation_length(A, rw, tol);
      terms = std::max<Index>(n - 1, 0);
      if (terms > kMaxTerms) throw NumericCapError("eval_two_sided: term cap exceeded outside");
      out.truncation_bound = A * std::pow(rw, static_cast<double>(terms + 1)) / (1.0 - rw);
    }
    Complex power = w;
    double rpow = rw;
    for (Index k = 1; k <= terms; ++k) {
      const Complex v = b.eval(-k);
      sum.add(v * power);
      weighted += static_cast<double>(k + 2) * std::abs(v) * rpow;
      power *= w;
      rpow *= rw;
    }
    out.terms_used = terms;
  }
  out.value = sum.value();
  out.abs_error_bound = out.truncation_bound + 1.01 * kMulErr * weighted +
                        2 * kUnit * std::abs(out.value);
  return out;
}

// ---------------------------------------------------------------------------

ArcSpec ArcSpec::full_circle() {
  ArcSpec a;
  a.alpha = 0.0;
  a.beta = 2 * std::numbers::pi;
  a.full = true;
  return a;
}

ArcSpec ArcSpec::open(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) reject("arc endpoints must be finite");
  if (!(alpha < beta)) reject("arc needs alpha < beta");
  if (!(beta - alpha < 2 * std::numbers::pi)) {
    reject("arc width must be < 2 pi; use the full circle instead");
  }
  ArcSpec a;
  a.alpha = alpha;
  a.beta = beta;
  return a;
}

double ArcSpec::width() const { return full ? 2 * std::numbers::pi : beta - alpha; }

bool ArcSpec::contains(double angle, double tol) const {
  if (full) return true;
  constexpr double two_pi = 2 * std::numbers::pi;
  double offset = std::fmod(angle - alpha, two_pi);
  if (offset < 0) offset += two_pi;
  return offset <= width() + tol || offset >= two_pi - tol;
}

// ---------------------------------------------------------------------------

ReflectionlessCheck periodic_reflectionless_check(const std::vector<Complex>& pattern,
                                                  const ArcSpec& arc) {
  if (pattern.empty()) reject("periodic_reflectionless_check: pattern must be nonempty");
  ReflectionlessCheck out;
  out.reduced = eventually_periodic_form({}, pattern);
  for (const RootOfUnity& pole : out.reduced.poles) {
    if (arc.contains(pole.angle(), 1e-12)) out.poles_on_arc.push_back(pole);
  }

  const TwoSidedSequence b = TwoSidedSequence::periodic(pattern);
  constexpr std::size_t kSamples = 50;
  out.samples = kSamples;
  bool numeric_ok = true;
  for (std::size_t i = 0; i < kSamples; ++i) {
    const double theta = arc.alpha + (static_cast<double>(i) + 0.5) * arc.width() / kSamples;
    const double rho = 1.1 + 0.8 * static_cast<double>((i * 7) % kSamples) / kSamples;
    const Complex z = std::polar(rho, theta);
    const EvalResult fminus = eval_two_sided(b, z, 1e-13);
    const Complex continued = out.reduced.evaluate(z);
    const double residual = std::abs(continued + fminus.value);
    const double allowed = fminus.abs_error_bound + 1e-10;
    out.max_numeric_residual = std::max(out.max_numeric_residual, residual);
    out.max_allowed_residual = std::max(out.max_allowed_residual, allowed);
    if (!(residual <= allowed)) numeric_ok = false;
  }

  if (!out.poles_on_arc.empty()) {
    const RootOfUnity& p = out.poles_on_arc.front();
    out.reason = "pole at exp(2 pi i " + std::to_string(p.k) + "/" + std::to_string(p.d) +
                 ") survives reduction and lies on the arc";
  } else if (!numeric_ok) {
    out.reason = "f_+ + f_- does not vanish outside the disk within the tail bound";
  } else {
    out.reason = "no surviving pole on the arc; f_+ + f_- = 0 confirmed at sample points";
  }
  out.pass = out.poles_on_arc.empty() && numeric_ok;
  return out;
}

DecayRuleResult decay_rule_check(const TwoSidedWindow& b, DecaySide side, double C, double D,
                                 double delta) {
  if (!(C > 0.0) || !(D > 0.0)) reject("decay_rule_check: C and D must be > 0");
  if (!(delta > 0.0)) reject("decay_rule_check: delta must be > 0");
  if (b.values.size() != static_cast<std::size_t>(2 * b.radius + 1)) {
    reject("decay_rule_check: window must hold 2W+1 values");
  }
  std::vector<Index> violations;
  for (Index k = 1; k <= b.radius; ++k) {
    const Index n = side == DecaySide::Positive ? k : -k;
    const double limit = C * std::exp(-D * static_cast<double>(k));
    if (std::abs(b.at(n)) > limit * (1.0 + 1e-12) + 1e-300) violations.push_back(n);
  }
  if (!violations.empty()) {
    std::ostringstream os;
    os << "decay hypothesis |b_n| <= C exp(-D|n|) fails at n =";
    for (Index n : violations) os << ' ' << n;
    throw std::invalid_argument(os.str());
  }
  DecayRuleResult out;
  for (Index n = -b.radius; n <= b.radius; ++n) {
    if (std::abs(b.at(n)) >= delta) {
      out.not_reflectionless = true;
      out.witness = n;
      out.witness_abs = std::abs(b.at(n));
      return out;
    }
  }
  return out;
}

}  // namespace nbscope
