#include <nbscope/random_series.hpp>
#include <nbscope/sequence.hpp>

#include "detail.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace nbscope {

using detail::reject;

DoubleDouble DoubleDouble::from(long double x) {
  DoubleDouble d;
  d.hi = static_cast<double>(x);
  d.lo = static_cast<double>(x - static_cast<long double>(d.hi));
  return d;
}

DoubleDouble DoubleDouble::parse(const std::string& text) {
  if (text == "sqrt2") return from(std::sqrt(2.0L));
  if (text == "sqrt2-1") return from(std::sqrt(2.0L) - 1.0L);
  if (text == "golden") return from((1.0L + std::sqrt(5.0L)) / 2.0L);
  if (text == "golden-1") return from((std::sqrt(5.0L) - 1.0L) / 2.0L);
  char* end = nullptr;
  const long double v = std::strtold(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
    reject("cannot parse rotation number '", text, "'");
  }
  return from(v);
}

bool looks_irrational(const DoubleDouble& q, std::int64_t max_denominator, double tolerance) {
  const long double x = q.value();
  for (std::int64_t d = 1; d <= max_denominator; ++d) {
    const long double scaled = x * static_cast<long double>(d);
    const long double p = std::nearbyint(scaled);
    if (std::fabs(scaled - p) <= static_cast<long double>(tolerance) * d) return false;
  }
  return true;
}

double rotation_phase(Index n, const DoubleDouble& q, double theta) {
  const double nd = static_cast<double>(n);
  const double prod = nd * q.hi;
  const double prod_err = std::fma(nd, q.hi, -prod);
  double r = prod - std::floor(prod);  // exact below 2^52
  const double t = theta - std::floor(theta);
  r += (prod_err + nd * q.lo) + t;
  r -= std::floor(r);
  if (r >= 1.0) r = std::nextafter(1.0, 0.0);
  return r;
}

bool is_factorial(Index n) {
  if (n < 1) return false;
  Index f = 1;
  for (Index k = 2; f < n; ++k) {
    if (f > std::numeric_limits<Index>::max() / k) return false;
    f *= k;
  }
  return f == n;
}

namespace {

Index isqrt(Index n) {
  auto r = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Largest j >= 2 with j! <= n (requires n >= 2), and j!.
std::pair<Index, Index> factorial_floor(Index n) {
  Index j = 2;
  Index f = 2;
  while (f <= n / (j + 1)) {
    ++j;
    f *= j;
  }
  return {j, f};
}

double erdos_soft_value(Index n) {
  // Gap between consecutive U blocks containing n: [prev_end+1, next_start-1].
  Index prev_end = -1;
  Index next_start = 2;
  if (n >= 2) {
    const auto [j, f] = factorial_floor(n);
    prev_end = f + j;
    next_start = f * (j + 1);
  }
  const Index length = next_start - 1 - prev_end;
  const Index t = n - (prev_end + 1);
  const Index rise = isqrt(length);
  const double v = static_cast<double>(std::min(t + 1, length - t)) / static_cast<double>(rise + 1);
  return std::min(1.0, v);
}

double boundary_value(const RotationSpec& spec, double x) {
  switch (spec.fn) {
    case BoundaryFn::FractionalPart: return x;
    case BoundaryFn::HalfStep: return x < 0.5 ? 1.0 : 0.0;
    case BoundaryFn::Constant: return spec.constant;
  }
  return x;
}

double boundary_sup(const RotationSpec& spec) {
  return spec.fn == BoundaryFn::Constant ? std::abs(spec.constant) : 1.0;
}

OneSidedSequence build(const PeriodicSpec& spec) {
  if (spec.pattern.empty()) reject("periodic: pattern must be nonempty");
  double bound = 0.0;
  for (const Complex& v : spec.pattern) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) reject("periodic: non-finite entry");
    bound = std::max(bound, std::abs(v));
  }
  const bool real = std::all_of(spec.pattern.begin(), spec.pattern.end(),
                                [](Complex v) { return v.imag() == 0.0; });
  auto pattern = spec.pattern;
  const auto period = static_cast<Index>(pattern.size());
  return OneSidedSequence::from_function(
      [pattern, period](Index n) { return pattern[static_cast<std::size_t>(n % period)]; }, bound,
      detail::classify_values(pattern), real, describe(spec));
}

OneSidedSequence build(const GapPowersSpec& spec) {
  if (!std::isfinite(spec.fill.real()) || !std::isfinite(spec.fill.imag())) {
    reject("gap-powers: non-finite fill value");
  }
  std::function<bool(Index)> member;
  switch (spec.set) {
    case ExponentSet::Factorials: member = is_factorial; break;
    case ExponentSet::Squares: member = is_square; break;
    case ExponentSet::PowersOfTwo:
      member = [](Index n) { return n > 0 && std::has_single_bit(static_cast<std::uint64_t>(n)); };
      break;
    case ExponentSet::Explicit: {
      if (spec.exponents.empty()) reject("gap-powers: explicit exponent set is empty");
      for (std::size_t i = 0; i < spec.exponents.size(); ++i) {
        if (spec.exponents[i] < 0) reject("gap-powers: negative exponent ", spec.exponents[i]);
        if (i > 0 && spec.exponents[i] <= spec.exponents[i - 1]) {
          reject("gap-powers: exponents must be strictly increasing");
        }
      }
      member = [exps = spec.exponents](Index n) {
        return std::binary_search(exps.begin(), exps.end(), n);
      };
      break;
    }
  }
  const Complex fill = spec.fill;
  const Complex values[] = {fill, Complex{0.0}};
  return OneSidedSequence::from_function(
      [member, fill](Index n) { return member(n) ? fill : Complex{0.0}; },
      std::max(std::abs(fill), 1.0), detail::classify_values(values), fill.imag() == 0.0,
      describe(spec));
}

OneSidedSequence build(const RudinShapiroSpec& spec) {
  return OneSidedSequence::from_function(
      [](Index n) {
        const auto u = static_cast<std::uint64_t>(n);
        return Complex{(std::popcount(u & (u >> 1)) & 1) ? -1.0 : 1.0};
      },
      1.0, ValueKind::ExactInteger, true, describe(spec));
}

OneSidedSequence build(const RotationSpec& spec) {
  if (!std::isfinite(spec.q.hi) || !std::isfinite(spec.theta)) reject("rotation: non-finite q or theta");
  if (!looks_irrational(spec.q)) {
    reject("rotation: q = ", static_cast<double>(spec.q.value()),
           " is within 1e-12 of a rational with denominator <= 1e6");
  }
  if (spec.fn == BoundaryFn::Constant && !std::isfinite(spec.constant)) {
    reject("rotation: non-finite constant");
  }
  ValueKind kind = ValueKind::Float;
  if (spec.fn == BoundaryFn::HalfStep) {
    kind = ValueKind::ExactInteger;
  } else if (spec.fn == BoundaryFn::Constant) {
    const std::vector<Complex> value{spec.constant};
    kind = detail::classify_values(value);
  }
  return OneSidedSequence::from_function(
      [spec](Index n) { return Complex{boundary_value(spec, rotation_phase(n, spec.q, spec.theta))}; },
      boundary_sup(spec), kind, true, describe(spec));
}

OneSidedSequence build(const ErdosSpec& spec) {
  if (spec.edge == ErdosEdge::Hard) {
    return OneSidedSequence::from_function(
        [](Index n) { return Complex{in_erdos_gap_set(n) ? 0.0 : 1.0}; }, 1.0,
        ValueKind::ExactInteger, true, describe(spec));
  }
  return OneSidedSequence::from_function(
      [](Index n) { return Complex{in_erdos_gap_set(n) ? 0.0 : erdos_soft_value(n)}; }, 1.0,
      ValueKind::Float, true, describe(spec));
}

OneSidedSequence build(const ExplicitSpec& spec) {
  if (spec.values.empty()) reject("explicit: value list is empty");
  double bound = 0.0;
  for (const Complex& v : spec.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) reject("explicit: non-finite entry");
    bound = std::max(bound, std::abs(v));
  }
  const bool real = std::all_of(spec.values.begin(), spec.values.end(),
                                [](Complex v) { return v.imag() == 0.0; });
  auto values = std::make_shared<const std::vector<Complex>>(spec.values);
  return OneSidedSequence::from_function(
      [values](Index n) { return (*values)[static_cast<std::size_t>(n)]; }, bound,
      detail::classify_values(*values), real, "explicit", static_cast<Index>(values->size()));
}

OneSidedSequence build(const StochasticSpec& spec) {
  if (!spec.process) reject("stochastic: missing process spec");
  return sample_process(*spec.process, spec.length);
}

}  // namespace

bool is_square(Index n) {
  if (n < 0) return false;
  const Index r = isqrt(n);
  return r * r == n;
}

bool in_erdos_gap_set(Index n) {
  if (n < 2) return false;
  const auto [j, f] = factorial_floor(n);
  return n <= f + j;
}

OneSidedSequence make_sequence(const GeneratorSpec& spec) {
  return std::visit([](const auto& s) { return build(s); }, spec);
}

namespace {

std::string fmt_complex(Complex v) {
  std::ostringstream os;
  os.precision(17);
  os << v.real();
  if (v.imag() != 0.0) os << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
  return os.str();
}

}  // namespace

std::string describe(const GeneratorSpec& spec) {
  struct Visitor {
    std::string operator()(const PeriodicSpec& s) const {
      std::string out = "periodic(";
      for (std::size_t i = 0; i < s.pattern.size(); ++i) {
        out += (i ? "," : "") + fmt_complex(s.pattern[i]);
      }
      return out + ")";
    }
    std::string operator()(const GapPowersSpec& s) const {
      const char* set = s.set == ExponentSet::Factorials ? "factorials"
                        : s.set == ExponentSet::Squares  ? "squares"
                        : s.set == ExponentSet::PowersOfTwo ? "powers-of-two"
                                                            : "explicit";
      return std::string("gap-powers(") + set + "," + fmt_complex(s.fill) + ")";
    }
    std::string operator()(const RudinShapiroSpec&) const { return "rudin-shapiro"; }
    std::string operator()(const RotationSpec& s) const {
      const char* fn = s.fn == BoundaryFn::FractionalPart ? "fractional-part"
                       : s.fn == BoundaryFn::HalfStep     ? "half-step"
                                                          : "constant";
      std::ostringstream os;
      os.precision(17);
      os << "rotation(" << fn << ",q=" << static_cast<double>(s.q.value()) << ",theta=" << s.theta
         << ")";
      return os.str();
    }
    std::string operator()(const ErdosSpec& s) const {
      return s.edge == ErdosEdge::Hard ? "erdos(hard)" : "erdos(soft)";
    }
    std::string operator()(const ExplicitSpec&) const { return "explicit"; }
    std::string operator()(const StochasticSpec&) const { return "stochastic"; }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace nbscope
