// Independent reference computations used by the tests. None of these call
// into the library's evaluation or search code.

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <vector>

namespace oracle {

/// Rudin-Shapiro coefficients from P_{k+1} = P_k Q_k, Q_{k+1} = P_k (-Q_k).
inline std::vector<int> rudin_shapiro(std::size_t length) {
  std::vector<int> p{1}, q{1};
  while (p.size() < length) {
    std::vector<int> np = p, nq = p;
    np.insert(np.end(), q.begin(), q.end());
    for (int x : q) nq.push_back(-x);
    p = std::move(np);
    q = std::move(nq);
  }
  p.resize(length);
  return p;
}

/// P_k and Q_k as coefficient arrays of length 2^k.
inline std::pair<std::vector<int>, std::vector<int>> rudin_shapiro_pair(int k) {
  std::vector<int> p{1}, q{1};
  for (int i = 0; i < k; ++i) {
    std::vector<int> np = p, nq = p;
    np.insert(np.end(), q.begin(), q.end());
    for (int x : q) nq.push_back(-x);
    p = std::move(np);
    q = std::move(nq);
  }
  return {p, q};
}

inline std::set<std::int64_t> factorials_up_to(std::int64_t limit) {
  std::set<std::int64_t> out;
  std::int64_t f = 1;
  for (std::int64_t k = 1; f <= limit; ++k) {
    f *= k;
    if (f <= limit) out.insert(f);
  }
  return out;
}

inline std::set<std::int64_t> squares_up_to(std::int64_t limit) {
  std::set<std::int64_t> out;
  for (std::int64_t j = 0; j * j <= limit; ++j) out.insert(j * j);
  return out;
}

/// Centres n in [W, horizon] that are members and have no member in [n-W, n-1].
inline std::vector<std::int64_t> isolated_members(const std::set<std::int64_t>& members,
                                                  std::int64_t W, std::int64_t horizon) {
  std::vector<std::int64_t> out;
  for (std::int64_t n : members) {
    if (n < W || n > horizon) continue;
    auto it = members.lower_bound(n - W);
    if (*it == n) out.push_back(n);
  }
  return out;
}

using Big = boost::multiprecision::cpp_bin_float_50;

/// sum_{n=first}^{last-1} a_n z^n in 50-digit arithmetic.
inline std::complex<double> partial_sum(const std::function<std::complex<double>(std::int64_t)>& a,
                                        std::int64_t first, std::int64_t last,
                                        std::complex<double> z) {
  Big re = 0, im = 0;
  Big pr = 1, pi = 0;  // z^n
  const Big zr = z.real(), zi = z.imag();
  for (std::int64_t n = 0; n < last; ++n) {
    if (n >= first) {
      const auto c = a(n);
      re += Big(c.real()) * pr - Big(c.imag()) * pi;
      im += Big(c.real()) * pi + Big(c.imag()) * pr;
    }
    const Big t = pr * zr - pi * zi;
    pi = pr * zi + pi * zr;
    pr = t;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

/// (1/2pi) int_alpha^beta |1 - r e^{i t}|^{-1} dt by Gauss-Kronrod on pieces
/// refined geometrically towards t = 0 (mod 2 pi), where the integrand peaks.
inline double geometric_arc_l1(double r, double alpha, double beta, double* error = nullptr) {
  using boost::math::quadrature::gauss_kronrod;
  const long double R = r;
  auto f = [R](long double t) {
    const long double s = std::sin(t / 2);
    const long double d = (1 - R) * (1 - R) + 4 * R * s * s;
    return 1.0L / std::sqrt(d);
  };
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  std::vector<long double> cuts{alpha, beta};
  for (long double k = std::floor(alpha / two_pi); k * two_pi <= beta + two_pi; k += 1) {
    const long double c = k * two_pi;
    cuts.push_back(c);
    for (long double h = (1 - R) / 8; h < std::numbers::pi_v<long double>; h *= 2) {
      cuts.push_back(c - h);
      cuts.push_back(c + h);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  long double total = 0, err_total = 0;
  long double prev = alpha;
  for (long double c : cuts) {
    if (c <= prev || c > beta) continue;
    long double err = 0;
    total += gauss_kronrod<long double, 61>::integrate(f, prev, c, 12, 1e-17L, &err);
    err_total += err;
    prev = c;
  }
  if (error) *error = static_cast<double>(err_total / two_pi);
  return static_cast<double>(total / two_pi);
}

/// Angles 2 pi k / p of the p-th roots of unity where sum_j c_j z^j does not
/// vanish, i.e. the surviving poles of P(z)/(1 - z^p).
inline std::vector<double> surviving_pole_angles(const std::vector<std::complex<double>>& c) {
  const std::size_t p = c.size();
  std::vector<double> out;
  for (std::size_t k = 0; k < p; ++k) {
    const long double angle = 2 * std::numbers::pi_v<long double> * k / p;
    std::complex<long double> sum = 0;
    for (std::size_t j = 0; j < p; ++j) {
      sum += std::complex<long double>(c[j].real(), c[j].imag()) *
             std::polar(1.0L, angle * static_cast<long double>(j));
    }
    if (std::abs(sum) > 1e-9L) out.push_back(static_cast<double>(angle));
  }
  return out;
}

/// Angle on the closed arc [alpha, beta] modulo 2 pi.
inline bool on_closed_arc(double angle, double alpha, double beta) {
  const double two_pi = 2 * std::numbers::pi;
  double off = std::fmod(angle - alpha, two_pi);
  if (off < 0) off += two_pi;
  return off <= (beta - alpha) + 1e-12 || off >= two_pi - 1e-12;
}

}  // namespace oracle
