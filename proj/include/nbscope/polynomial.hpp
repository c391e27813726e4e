// Exact univariate polynomials over Q, cyclotomic factors, and the reduced
// rational form of an eventually periodic power series.

#pragma once

#include <nbscope/sequence.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <string>
#include <vector>

namespace nbscope {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double.
Rational to_rational(double x);
std::string to_string(const Rational& r);

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);  // ascending powers

  static Polynomial monomial(Rational c, std::size_t power);

  const std::vector<Rational>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }

  Complex evaluate(Complex z) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Quotient and remainder; throws on division by zero.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den);

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Phi_d with integer coefficients.
Polynomial cyclotomic(Index d);

/// exp(2 pi i k / d) with gcd(k, d) = 1.
struct RootOfUnity {
  Index k = 0;
  Index d = 1;
  double angle() const;  // in [0, 2 pi)
  Complex value() const;
};

/// f = numerator / denominator with every cancellable cyclotomic factor
/// removed. For float input the coefficients are kept as doubles and a pole
/// cancels when the numerator vanishes there to within 1e-9.
struct RationalForm {
  bool exact = true;
  Polynomial numerator;
  Polynomial denominator;
  std::vector<Complex> float_numerator;
  std::vector<Complex> float_denominator;
  std::vector<RootOfUnity> poles;
  std::vector<Index> surviving_cyclotomic_orders;

  Complex evaluate(Complex z) const;
};

/// Rational form of sum_{n<pre} prefix_n z^n + z^pre * P(z) / (1 - z^T)
/// where P has the coefficients of one period.
RationalForm eventually_periodic_form(std::span<const Complex> prefix,
                                      std::span<const Complex> period);

}  // namespace nbscope
