#include <nbscope/polynomial.hpp>

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace nbscope {

Rational to_rational(double x) {
  if (!std::isfinite(x)) detail::reject("cannot convert non-finite value to rational");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));  // exact
  exponent -= 53;
  Rational r(scaled);
  boost::multiprecision::cpp_int pow2 = 1;
  pow2 <<= std::abs(exponent);
  if (exponent >= 0) {
    r *= Rational(pow2);
  } else {
    r /= Rational(pow2);
  }
  return r;
}

std::string to_string(const Rational& r) { return r.str(); }

Polynomial::Polynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::monomial(Rational c, std::size_t power) {
  std::vector<Rational> v(power + 1, Rational(0));
  v[power] = std::move(c);
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Complex Polynomial::evaluate(Complex z) const {
  Complex acc{0.0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * z + Complex{static_cast<double>(*it)};
  }
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(out));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = num.c_;
  const std::size_t dd = den.c_.size() - 1;
  if (rem.size() <= dd) return {Polynomial{}, num};
  std::vector<Rational> quot(rem.size() - dd, Rational(0));
  const Rational& lead = den.c_.back();
  for (std::size_t i = rem.size(); i-- > dd;) {
    if (rem[i] == 0) continue;
    const Rational factor = rem[i] / lead;
    quot[i - dd] = factor;
    for (std::size_t j = 0; j <= dd; ++j) rem[i - dd + j] -= factor * den.c_[j];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial cyclotomic(Index d) {
  if (d < 1) detail::reject("cyclotomic order must be >= 1");
  // z^d - 1 divided by Phi_e for every proper divisor e of d.
  Polynomial p = Polynomial::monomial(Rational(1), static_cast<std::size_t>(d)) -
                 Polynomial::monomial(Rational(1), 0);
  for (Index e = 1; e < d; ++e) {
    if (d % e == 0) p = Polynomial::divmod(p, cyclotomic(e)).first;
  }
  return p;
}

double RootOfUnity::angle() const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d);
}

Complex RootOfUnity::value() const { return std::polar(1.0, angle()); }

namespace {

Complex eval_float(const std::vector<Complex>& c, Complex z) {
  Complex acc{0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

void append_primitive_roots(Index d, std::vector<RootOfUnity>& poles) {
  for (Index k = 0; k < d; ++k) {
    if (std::gcd(k, d) == 1) poles.push_back({k, d});
  }
}

}  // namespace

Complex RationalForm::evaluate(Complex z) const {
  if (exact) return numerator.evaluate(z) / denominator.evaluate(z);
  return eval_float(float_numerator, z) / eval_float(float_denominator, z);
}

RationalForm eventually_periodic_form(std::span<const Complex> prefix,
                                      std::span<const Complex> period) {
  if (period.empty()) detail::reject("rational form: period block is empty");
  const auto T = static_cast<Index>(period.size());
  const auto pre = prefix.size();
  std::vector<Complex> all(prefix.begin(), prefix.end());
  all.insert(all.end(), period.begin(), period.end());
  const bool exact = detail::classify_values(all) != ValueKind::Float;

  RationalForm form;
  form.exact = exact;
  std::vector<Index> divisors;
  for (Index d = 1; d <= T; ++d) {
    if (T % d == 0) divisors.push_back(d);
  }

  if (exact) {
    std::vector<Rational> pre_c, per_c;
    for (const Complex& v : prefix) pre_c.push_back(to_rational(v.real()));
    for (const Complex& v : period) per_c.push_back(to_rational(v.real()));
    const Polynomial one_minus = Polynomial::monomial(Rational(1), 0) -
                                 Polynomial::monomial(Rational(1), static_cast<std::size_t>(T));
    Polynomial num = Polynomial(pre_c) * one_minus +
                     Polynomial::monomial(Rational(1), pre) * Polynomial(per_c);
    Polynomial den = one_minus;
    for (Index d : divisors) {
      const Polynomial phi = cyclotomic(d);
      if (num.is_zero()) {
        den = Polynomial::divmod(den, phi).first;
        continue;
      }
      auto [q, r] = Polynomial::divmod(num, phi);
      if (r.is_zero()) {
        num = std::move(q);
        den = Polynomial::divmod(den, phi).first;
      } else {
        form.surviving_cyclotomic_orders.push_back(d);
        append_primitive_roots(d, form.poles);
      }
    }
    // Normalise so the denominator has constant term 1 when possible.
    if (!den.coefficients().empty() && den.coefficients().front() != 0) {
      const Rational c0 = den.coefficients().front();
      std::vector<Rational> n2 = num.coefficients(), d2 = den.coefficients();
      for (auto& c : n2) c /= c0;
      for (auto& c : d2) c /= c0;
      num = Polynomial(std::move(n2));
      den = Polynomial(std::move(d2));
    }
    form.numerator = std::move(num);
    form.denominator = std::move(den);
    return form;
  }

  // Float coefficients: N(z) = Pre(z)(1 - z^T) + z^pre P(z), D(z) = 1 - z^T.
  std::vector<Complex> num(pre + static_cast<std::size_t>(T), Complex{0.0});
  for (std::size_t i = 0; i < pre; ++i) {
    num[i] += prefix[i];
    num[i + static_cast<std::size_t>(T)] -= prefix[i];
  }
  for (std::size_t j = 0; j < period.size(); ++j) num[pre + j] += period[j];
  std::vector<Complex> den(static_cast<std::size_t>(T) + 1, Complex{0.0});
  den[0] = 1.0;
  den[static_cast<std::size_t>(T)] = -1.0;
  for (Index k = 0; k < T; ++k) {
    const Index g = std::gcd(k, T);
    const RootOfUnity root{k / g, T / g};
    if (std::abs(eval_float(num, root.value())) > 1e-9) form.poles.push_back(root);
  }
  std::sort(form.poles.begin(), form.poles.end(), [](const RootOfUnity& a, const RootOfUnity& b) {
    return a.d != b.d ? a.d < b.d : a.k < b.k;
  });
  form.float_numerator = std::move(num);
  form.float_denominator = std::move(den);
  return form;
}

}  // namespace nbscope
