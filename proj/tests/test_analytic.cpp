#include "oracles.hpp"

#include <nbscope/analytic.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nbscope;

namespace {

const double kPi = std::numbers::pi;

OneSidedSequence ones() { return make_sequence(PeriodicSpec{{1.0}}); }
OneSidedSequence factorial_gaps() {
  return make_sequence(GapPowersSpec{ExponentSet::Factorials, {}, 1.0});
}
OneSidedSequence rudin() { return make_sequence(RudinShapiroSpec{}); }

/// Bounded sequence with values drawn from the unit disk, seeded.
OneSidedSequence random_sequence(std::uint64_t seed, Index length) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v;
  while (static_cast<Index>(v.size()) < length) {
    const Complex z{u(rng), u(rng)};
    if (std::abs(z) <= 1.0) v.push_back(z);
  }
  return make_sequence(ExplicitSpec{v});
}

TwoSidedWindow two_sided(Index radius, std::vector<Complex> values) {
  TwoSidedWindow w;
  w.radius = radius;
  w.values = std::move(values);
  w.provenance = Index{0};
  return w;
}

}  // namespace

TEST_CASE("truncation_length") {
  CHECK(truncation_length(1.0, 0.5, 1e-10) == 35);
  CHECK(truncation_length(1.0, 0.9, 1e-8) == 197);
  CHECK(truncation_length(1.0, 0.5, 3.0) == 0);
  CHECK(truncation_length(0.0, 0.5, 1e-10) == 0);
  CHECK_THROWS_AS(truncation_length(1.0, 1.0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(truncation_length(1.0, 0.0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(truncation_length(1.0, 0.5, 0.0), std::invalid_argument);
  // Minimality against the defining inequality.
  for (double r : {0.1, 0.37, 0.8, 0.99, 0.9999}) {
    for (double tol : {1e-3, 1e-9, 1e-14}) {
      const Index N = truncation_length(2.0, r, tol);
      const long double R = r;
      CHECK(2.0L * std::pow(R, N) / (1 - R) <= tol);
      if (N > 0) CHECK(2.0L * std::pow(R, N - 1) / (1 - R) > tol);
    }
  }
}

TEST_CASE("eval_f examples") {
  SUBCASE("geometric series") {
    auto r = eval_f(ones(), 0.5, 1e-12);
    CHECK(std::abs(r.value - Complex{2.0}) <= 1e-12);
    CHECK(r.abs_error_bound >= r.truncation_bound);
    CHECK(r.truncation_bound <= 1e-12);
  }
  SUBCASE("factorial gaps at one half") {
    auto r = eval_f(factorial_gaps(), 0.5, 1e-10);
    const double ref = 0.5 + 0.25 + std::pow(0.5, 6) + std::pow(0.5, 24) + std::pow(0.5, 120);
    CHECK(std::abs(r.value.real() - 0.7656250596) <= 1e-10);
    CHECK(std::abs(r.value.real() - ref) <= r.abs_error_bound);
  }
  SUBCASE("Rudin-Shapiro at zero") {
    auto r = eval_f(rudin(), 0.0, 1e-10);
    CHECK(r.value == Complex{1.0});
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(eval_f(ones(), 1.0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(eval_f(ones(), Complex{0.0, 0.9999999999}, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(eval_f(ones(), 0.5, 0.0), std::invalid_argument);
  }
  SUBCASE("term cap") {
    CHECK_THROWS_AS(eval_f(ones(), 1.0 - 1e-8, 1e-12), NumericCapError);
  }
}

TEST_CASE("tail bound holds against an extended-precision oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> radius(0.05, 0.95), angle(0.0, 2 * kPi);
  std::uniform_int_distribution<Index> pickN(1, 60);
  for (int trial = 0; trial < 200; ++trial) {
    const Index N = pickN(rng);
    const auto seq = random_sequence(static_cast<std::uint64_t>(trial), 5 * N + 1);
    const Complex z = std::polar(radius(rng), angle(rng));
    const auto a = [&](std::int64_t n) { return seq(n); };
    const Complex tail = oracle::partial_sum(a, N, 5 * N, z);
    const double bound = seq.bound() * std::pow(std::abs(z), N) / (1 - std::abs(z));
    REQUIRE(std::abs(tail) <= bound);
  }
}

TEST_CASE("eval_f agrees with the oracle within its error bound") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> radius(0.0, 0.9), angle(0.0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex z = std::polar(radius(rng), angle(rng));
    const auto seq = rudin();
    const auto r = eval_f(seq, z, 1e-13);
    const auto a = [&](std::int64_t n) { return seq(n); };
    const Complex ref = oracle::partial_sum(a, 0, 4 * r.terms_used + 400, z);
    REQUIRE(std::abs(r.value - ref) <= r.abs_error_bound);
  }
}

TEST_CASE("shift identity") {
  SUBCASE("geometric, N = 3") {
    auto p = eval_shift_pair(ones(), 3, 0.5, 1e-12);
    CHECK(std::abs(p.plus.value - Complex{2.0}) <= 1e-11);
    CHECK(std::abs(p.minus.value - Complex{14.0}) <= 1e-12);
    CHECK(std::abs(p.scaled.value - Complex{16.0}) <= 1e-10);
    CHECK(p.identity_residual <= 2 * p.combined_error_bound);
  }
  SUBCASE("N = 0 reduces to f") {
    auto seq = rudin();
    auto p = eval_shift_pair(seq, 0, Complex{0.3, -0.2}, 1e-12);
    CHECK(p.minus.value == Complex{0.0});
    CHECK(std::abs(p.plus.value - eval_f(seq, Complex{0.3, -0.2}, 1e-12).value) <= 1e-12);
  }
  SUBCASE("Rudin-Shapiro, N = 8, z = 0.4i") {
    const auto seq = rudin();
    const Complex z{0.0, 0.4};
    auto p = eval_shift_pair(seq, 8, z, 1e-12);
    CHECK(p.identity_residual <= 2 * p.combined_error_bound);
    const auto a = [&](std::int64_t n) { return seq(n + 8); };
    const Complex ref = oracle::partial_sum(a, 0, 200, z);
    CHECK(std::abs(p.plus.value - ref) <= p.plus.abs_error_bound);
  }
  SUBCASE("exact rational route") {
    auto e = eval_shift_pair_exact(rudin(), 5, Rational(1, 2), Rational(0), 30);
    CHECK(e.residual_re == 0);
    CHECK(e.residual_im == 0);
    auto g = eval_shift_pair_exact(ones(), 3, Rational(1, 2), Rational(0), 10);
    CHECK(g.minus_re == 14);
    CHECK_THROWS_AS(eval_shift_pair_exact(make_sequence(ExplicitSpec{{0.1, 0.2}}), 1, Rational(1, 2),
                                          Rational(0), 1),
                    std::invalid_argument);
  }
  SUBCASE("z = 0 is rejected") {
    CHECK_THROWS_AS(eval_shift_pair(ones(), 2, 0.0, 1e-10), std::invalid_argument);
  }
}

TEST_CASE("two-sided evaluation") {
  const auto all_ones = TwoSidedSequence::periodic({1.0});
  SUBCASE("inside") {
    auto r = eval_two_sided(all_ones, 0.5, 1e-13);
    CHECK(std::abs(r.value - Complex{2.0}) <= 1e-12);
  }
  SUBCASE("outside matches the continuation of 1/(1-z)") {
    auto r = eval_two_sided(all_ones, 2.0, 1e-13);
    CHECK(std::abs(r.value - Complex{1.0}) <= r.abs_error_bound + 1e-13);
    CHECK(std::abs(r.value - (-1.0 / (1.0 - 2.0))) <= 1e-12);
  }
  SUBCASE("single term at -1") {
    auto r = eval_two_sided(TwoSidedSequence::zero_padded(two_sided(1, {1.0, 0.0, 0.0})), 2.0, 1e-12);
    CHECK(r.value == Complex{0.5});
    CHECK(r.truncation_bound == 0.0);
  }
  SUBCASE("unit circle rejected") {
    CHECK_THROWS_AS(eval_two_sided(all_ones, Complex{0.0, 1.0}, 1e-10), std::invalid_argument);
  }
  SUBCASE("outside bound") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> radius(1.1, 3.0), angle(0.0, 2 * kPi);
    const auto b = TwoSidedSequence::from_function(
        [](Index n) { return n < 0 ? Complex{std::cos(static_cast<double>(n))} : Complex{0.0}; }, 1.0);
    for (int i = 0; i < 100; ++i) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const auto r = eval_two_sided(b, z, 1e-12);
      REQUIRE(std::abs(r.value) <= 1.0 / (1.0 - 1.0 / std::abs(z)));
    }
  }
}

TEST_CASE("arc spec") {
  CHECK_THROWS_AS(ArcSpec::open(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ArcSpec::open(0.0, 2 * kPi), std::invalid_argument);
  const auto a = ArcSpec::open(-0.25, 0.25);
  CHECK(a.contains(0.0));
  CHECK(a.contains(2 * kPi - 0.1));
  CHECK_FALSE(a.contains(kPi));
  CHECK(ArcSpec::full_circle().contains(1.234));
}

TEST_CASE("periodic reflectionless check examples") {
  const auto arc = ArcSpec::open(0.1, 2 * kPi - 0.1);
  const auto around_one = ArcSpec::open(-0.5, 0.5);
  SUBCASE("constant pattern away from 1") {
    auto r = periodic_reflectionless_check({1.0}, arc);
    CHECK(r.pass);
    CHECK(r.samples == 50);
    CHECK(r.max_numeric_residual <= r.max_allowed_residual);
  }
  SUBCASE("pattern (1,0) with z = 1 on the arc") {
    auto r = periodic_reflectionless_check({1.0, 0.0}, around_one);
    CHECK_FALSE(r.pass);
    REQUIRE(r.poles_on_arc.size() == 1);
    CHECK(r.poles_on_arc[0].d == 1);
  }
  SUBCASE("pattern (1,-1) cancels the pole at 1") {
    auto r = periodic_reflectionless_check({1.0, -1.0}, around_one);
    CHECK(r.pass);
    REQUIRE(r.reduced.poles.size() == 1);
    CHECK(r.reduced.poles[0].d == 2);
  }
}

TEST_CASE("periodic check agrees with the root-of-unity oracle on all short patterns") {
  const std::vector<std::pair<double, double>> arcs = {
      {0.1, 2 * kPi - 0.1}, {-0.5, 0.5}, {kPi / 2, 3 * kPi / 2}, {0.2, 1.0}, {kPi - 0.01, kPi + 0.01}};
  int checked = 0;
  for (int len = 1; len <= 4; ++len) {
    int combos = 1;
    for (int i = 0; i < len; ++i) combos *= 3;
    for (int c = 0; c < combos; ++c) {
      std::vector<Complex> pattern;
      int rest = c;
      for (int i = 0; i < len; ++i) {
        pattern.push_back(static_cast<double>(rest % 3 - 1));
        rest /= 3;
      }
      const auto poles = oracle::surviving_pole_angles(pattern);
      for (auto [alpha, beta] : arcs) {
        bool expect = true;
        for (double angle : poles) expect = expect && !oracle::on_closed_arc(angle, alpha, beta);
        const auto r = periodic_reflectionless_check(pattern, ArcSpec::open(alpha, beta));
        REQUIRE(r.pass == expect);
        ++checked;
      }
    }
  }
  CHECK(checked == 5 * (3 + 9 + 27 + 81));
}

TEST_CASE("decay rule examples") {
  SUBCASE("single term at -1") {
    auto r = decay_rule_check(two_sided(2, {0.0, 1.0, 0.0, 0.0, 0.0}), DecaySide::Positive, 1.0, 1.0, 0.5);
    CHECK(r.not_reflectionless);
    CHECK(r.witness == -1);
  }
  SUBCASE("all zero") {
    auto r = decay_rule_check(two_sided(3, std::vector<Complex>(7, 0.0)), DecaySide::Positive, 1.0, 1.0, 0.5);
    CHECK_FALSE(r.not_reflectionless);
  }
  SUBCASE("geometric decay on the right with b_0 = 1") {
    std::vector<Complex> v;
    for (Index n = -4; n <= 4; ++n) v.push_back(n < 0 ? 0.0 : std::ldexp(1.0, static_cast<int>(-n)));
    auto r = decay_rule_check(two_sided(4, v), DecaySide::Positive, 1.0, std::log(2.0), 0.5);
    CHECK(r.not_reflectionless);
    CHECK(r.witness == 0);
  }
  SUBCASE("violated hypothesis lists indices") {
    std::vector<Complex> v(5, 0.0);
    v[3] = 0.9;  // b_1
    v[4] = 0.5;  // b_2
    try {
      decay_rule_check(two_sided(2, v), DecaySide::Positive, 1.0, 1.0, 0.5);
      FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("n = 1 2") != std::string::npos);
    }
  }
}

TEST_CASE("boundary probe matches the quadrature oracle") {
  const auto seq = ones();
  const std::vector<double> radii{0.9, 0.99};
  SUBCASE("full circle") {
    auto rep = boundary_l1_scan(seq, ArcSpec::full_circle(), radii, 8192, 1e-12);
    for (const auto& ri : rep.radii) {
      REQUIRE_FALSE(ri.skipped);
      const double ref = oracle::geometric_arc_l1(ri.r, 0.0, 2 * kPi);
      CHECK(std::abs(ri.integral - ref) <= ri.quad_err + ri.trunc_err + 1e-12);
      // Closed form: (2 / (pi (1 + r))) K(2 sqrt(r) / (1 + r)).
      const double k = 2 * std::sqrt(ri.r) / (1 + ri.r);
      const double closed = 2.0 / (kPi * (1 + ri.r)) * std::comp_ellint_1(k);
      CHECK(std::abs(ref - closed) <= 1e-10);
    }
  }
  SUBCASE("open arc") {
    auto rep = boundary_l1_scan(seq, ArcSpec::open(0.3, 2.0), radii, 512, 1e-12);
    for (const auto& ri : rep.radii) {
      const double ref = oracle::geometric_arc_l1(ri.r, 0.3, 2.0);
      CHECK(std::abs(ri.integral - ref) <= ri.quad_err + ri.trunc_err + 1e-12);
    }
  }
  SUBCASE("arc through the peak") {
    auto rep = boundary_l1_scan(seq, ArcSpec::open(-0.4, 0.2), {0.9}, 1024, 1e-12);
    const double ref = oracle::geometric_arc_l1(0.9, -0.4, 0.2);
    CHECK(std::abs(rep.radii[0].integral - ref) <= rep.radii[0].quad_err + rep.radii[0].trunc_err + 1e-12);
  }
}

TEST_CASE("boundary probe: factorial gaps grow along the real radius") {
  auto rep = boundary_l1_scan(factorial_gaps(), ArcSpec::open(-0.25, 0.25), {0.9, 0.99, 0.999},
                              4096, 1e-10);
  REQUIRE(rep.radii.size() == 3);
  CHECK(rep.radii[0].integral < rep.radii[1].integral);
  CHECK(rep.radii[1].integral < rep.radii[2].integral);
}

TEST_CASE("boundary probe: doubled resolution stays within the reported error") {
  const auto seq = rudin();
  for (Index M : {256, 1024}) {
    auto coarse = boundary_l1_scan(seq, ArcSpec::open(1.0, 2.5), {0.8, 0.95}, M, 1e-12);
    auto fine = boundary_l1_scan(seq, ArcSpec::open(1.0, 2.5), {0.8, 0.95}, 2 * M, 1e-12);
    for (std::size_t i = 0; i < coarse.radii.size(); ++i) {
      const auto& c = coarse.radii[i];
      CHECK(std::abs(fine.radii[i].integral - c.integral) <= c.quad_err + c.trunc_err);
    }
  }
}

TEST_CASE("boundary probe preconditions and skipping") {
  const auto seq = ones();
  CHECK_THROWS_AS(boundary_l1_scan(seq, ArcSpec::full_circle(), {0.5}, 32, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(boundary_l1_scan(seq, ArcSpec::full_circle(), {0.9, 0.5}, 64, 1e-10),
                  std::invalid_argument);
  CHECK_THROWS_AS(boundary_l1_scan(seq, ArcSpec::full_circle(), {1.0}, 64, 1e-10),
                  std::invalid_argument);
  auto finite = make_sequence(ExplicitSpec{std::vector<Complex>(100, 1.0)});
  auto rep = boundary_l1_scan(finite, ArcSpec::full_circle(), {0.5, 0.99}, 64, 1e-10);
  CHECK_FALSE(rep.radii[0].skipped);
  CHECK(rep.radii[1].skipped);
  CHECK_FALSE(rep.growth_fit.has_value());
}

TEST_CASE("probe results do not depend on the worker count") {
  const auto seq = rudin();
  setenv("NBSCOPE_THREADS", "1", 1);
  auto one = boundary_l1_scan(seq, ArcSpec::full_circle(), {0.5, 0.9, 0.99}, 256, 1e-12);
  setenv("NBSCOPE_THREADS", "4", 1);
  auto four = boundary_l1_scan(seq, ArcSpec::full_circle(), {0.5, 0.9, 0.99}, 256, 1e-12);
  unsetenv("NBSCOPE_THREADS");
  for (std::size_t i = 0; i < one.radii.size(); ++i) {
    CHECK(one.radii[i].integral == four.radii[i].integral);
    CHECK(one.radii[i].quad_err == four.radii[i].quad_err);
  }
}
