#include "oracles.hpp"

#include <nbscope/random_series.hpp>
#include <nbscope/right_limits.hpp>

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>

using namespace nbscope;

namespace {

OneSidedSequence periodic(std::vector<Complex> p) { return make_sequence(PeriodicSpec{std::move(p)}); }
OneSidedSequence factorial_gaps() {
  return make_sequence(GapPowersSpec{ExponentSet::Factorials, {}, 1.0});
}
OneSidedSequence square_gaps() { return make_sequence(GapPowersSpec{ExponentSet::Squares, {}, 1.0}); }
OneSidedSequence rudin() { return make_sequence(RudinShapiroSpec{}); }

OneSidedSequence hecke() {
  RotationSpec r;
  r.q = DoubleDouble::parse("sqrt2-1");
  return make_sequence(r);
}

OneSidedSequence random_signs(std::uint64_t seed, Index length) {
  ProcessSpec spec;
  spec.kind = IidProcess{DiscreteDistribution{{-1.0, 1.0}, {0.5, 0.5}}};
  spec.seed = seed;
  return sample_process(spec, length);
}

/// Eventually periodic integer sequence: prefix then repeated block.
OneSidedSequence eventually_periodic(const std::vector<int>& prefix, const std::vector<int>& block,
                                     Index length) {
  std::vector<Complex> v;
  for (Index n = 0; n < length; ++n) {
    const auto p = static_cast<Index>(prefix.size());
    v.push_back(n < p ? prefix[static_cast<std::size_t>(n)]
                      : block[static_cast<std::size_t>((n - p) % static_cast<Index>(block.size()))]);
  }
  return make_sequence(ExplicitSpec{v});
}

}  // namespace

TEST_CASE("right-limit extraction") {
  SUBCASE("period two gives two phase windows") {
    auto r = extract_right_limits(periodic({1.0, 0.0}), 2, 1000, 0.0, 10);
    REQUIRE(r.candidates.size() == 2);
    for (const auto& c : r.candidates) CHECK(c.recurrence_indices.size() >= 495);
    CHECK(r.candidates[0].window.values != r.candidates[1].window.values);
    CHECK_FALSE(r.truncated);
  }
  SUBCASE("factorial gaps contain the zero window and single-spike windows") {
    auto r = extract_right_limits(factorial_gaps(), 2, 10000, 0.0, 100);
    bool zero = false, spike = false;
    for (const auto& c : r.candidates) {
      int ones = 0;
      for (Complex v : c.window.values) ones += v == Complex{1.0};
      zero = zero || ones == 0;
      spike = spike || ones == 1;
    }
    CHECK(zero);
    CHECK(spike);
  }
  SUBCASE("every recurrence index lies within eps of the leader") {
    const auto seq = hecke();
    auto r = extract_right_limits(seq, 3, 5000, 0.1, 50);
    for (const auto& c : r.candidates) {
      for (Index n : c.recurrence_indices) {
        const auto w = window(seq, n, 3);
        for (std::size_t k = 0; k < w.values.size(); ++k) {
          REQUIRE(std::abs(w.values[k] - c.window.values[k]) <= 0.1);
        }
      }
    }
  }
  SUBCASE("soft Erdos windows are near constant") {
    auto r = extract_right_limits(make_sequence(ErdosSpec{ErdosEdge::Soft}), 3, 1000000, 0.1, 1000);
    REQUIRE_FALSE(r.candidates.empty());
    for (const auto& c : r.candidates) {
      double lo = 1.0, hi = 0.0;
      for (Complex v : c.window.values) {
        lo = std::min(lo, v.real());
        hi = std::max(hi, v.real());
      }
      CHECK((hi - lo) / 2 <= 0.2);
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(extract_right_limits(rudin(), 0, 1000, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(extract_right_limits(rudin(), 5, 40, 0.0, 10), std::invalid_argument);
  }
}

TEST_CASE("gap certificates") {
  SUBCASE("factorials, W = 4") {
    auto c = find_gap_certificate(factorial_gaps(), 4, 1000, 0.0, 0.5);
    REQUIRE(c);
    CHECK(c->hits == std::vector<Index>{24, 120, 720});
    CHECK(c->kind == CertificateKind::GapZeroFlank);
    CHECK(verify(*c, factorial_gaps()));
  }
  SUBCASE("squares match the membership oracle") {
    const Index horizon = 20000;
    auto c = find_gap_certificate(square_gaps(), 4, horizon, 0.0, 0.5);
    REQUIRE(c);
    CHECK(c->hits == oracle::isolated_members(oracle::squares_up_to(horizon), 4, horizon));
    CHECK(std::find(c->hits.begin(), c->hits.end(), 49) != c->hits.end());
    CHECK(std::find(c->hits.begin(), c->hits.end(), 4) == c->hits.end());
  }
  SUBCASE("constant sequence has none") {
    CHECK_FALSE(find_gap_certificate(periodic({1.0}), 4, 1000, 0.0, 0.5));
  }
  SUBCASE("decay allowance widens the flank test") {
    const std::vector<Complex> v{0.0, 0.0, 0.0, 0.3, 1.0, 0.0, 0.0, 0.3, 1.0, 0.0, 0.0, 0.3, 1.0};
    const auto seq = make_sequence(ExplicitSpec{v});
    CHECK_FALSE(find_gap_certificate(seq, 2, 12, 0.0, 0.5));
    auto c = find_gap_certificate(seq, 2, 12, 0.0, 0.5, Decay{1.0, 1.0});
    REQUIRE(c);
    CHECK(c->hits == std::vector<Index>{4, 8, 12});
    CHECK(verify(*c, seq));
  }
  SUBCASE("delta must exceed twice eps") {
    CHECK_THROWS_AS(find_gap_certificate(factorial_gaps(), 4, 1000, 0.3, 0.5), std::invalid_argument);
  }
  SUBCASE("a tampered certificate fails verification") {
    auto c = find_gap_certificate(factorial_gaps(), 4, 1000, 0.0, 0.5);
    REQUIRE(c);
    c->hits.push_back(721);
    CHECK_FALSE(verify(*c, factorial_gaps()));
  }
}

TEST_CASE("pair certificates") {
  SUBCASE("Rudin-Shapiro backward pairs") {
    const auto seq = rudin();
    auto all = enumerate_pair_matches(seq, 4, 4096, 0.0, 1.0, FlankSide::Backward);
    for (Index j = 2; j <= 10; ++j) {
      const std::pair<Index, Index> want{Index{1} << j, 3 * (Index{1} << j)};
      CHECK(std::binary_search(all.begin(), all.end(), want));
    }
    auto r = find_pair_certificate(seq, 4, 4096, 0.0, 1.0, FlankSide::Backward);
    REQUIRE(r.certificate);
    CHECK(verify(*r.certificate, seq));
    CHECK(r.certificate->min_separation == 2.0);
    CHECK_FALSE(r.overflow);
  }
  SUBCASE("Hecke forward pair (29, 70)") {
    const auto seq = hecke();
    CHECK(pair_qualifies(seq, 29, 70, 5, 0.05, 0.5, FlankSide::Forward));
    CHECK(seq(70).real() == doctest::Approx(0.99495).epsilon(1e-4));
    CHECK(seq(29).real() == doctest::Approx(0.01219).epsilon(1e-3));
  }
  SUBCASE("periodic input has no mismatched pair") {
    auto r = find_pair_certificate(periodic({1.0, 0.0}), 3, 2000, 0.0, 0.5, FlankSide::Backward);
    CHECK_FALSE(r.certificate);
    CHECK(r.pairs.empty());
  }
  SUBCASE("greedy pairs are disjoint, sorted and qualify") {
    const auto seq = random_signs(3, 5000);
    auto r = find_pair_certificate(seq, 3, 4999, 0.0, 1.0, FlankSide::Forward);
    REQUIRE(r.certificate);
    std::vector<Index> used;
    for (auto [n, m] : r.pairs) {
      REQUIRE(n < m);
      REQUIRE(pair_qualifies(seq, n, m, 3, 0.0, 1.0, FlankSide::Forward));
      used.push_back(n);
      used.push_back(m);
    }
    std::sort(used.begin(), used.end());
    CHECK(std::adjacent_find(used.begin(), used.end()) == used.end());
    CHECK(std::is_sorted(r.pairs.begin(), r.pairs.end()));
  }
  SUBCASE("hash search agrees with brute force") {
    const auto seq = random_signs(11, 400);
    for (auto side : {FlankSide::Backward, FlankSide::Forward}) {
      auto fast = enumerate_pair_matches(seq, 2, 399, 0.0, 1.0, side);
      std::vector<std::pair<Index, Index>> slow;
      for (Index m = 0; m <= 399; ++m) {
        for (Index n = 0; n < m; ++n) {
          const bool in_range = side == FlankSide::Backward ? (n >= 2) : (m + 2 <= 399);
          if (in_range && pair_qualifies(seq, n, m, 2, 0.0, 1.0, side)) slow.emplace_back(n, m);
        }
      }
      std::sort(slow.begin(), slow.end());
      REQUIRE(fast == slow);
    }
  }
  SUBCASE("float flanks within eps") {
    const auto seq = random_signs(5, 2000);
    std::vector<Complex> noisy;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    for (Index n = 0; n < 2000; ++n) noisy.push_back(seq(n) + jitter(rng));
    const auto fseq = make_sequence(ExplicitSpec{noisy});
    auto fast = enumerate_pair_matches(fseq, 2, 1999, 0.05, 1.0, FlankSide::Backward);
    std::size_t slow = 0;
    for (Index m = 2; m <= 1999; ++m) {
      for (Index n = 2; n < m; ++n) slow += pair_qualifies(fseq, n, m, 2, 0.05, 1.0, FlankSide::Backward);
    }
    CHECK(fast.size() == slow);
  }
}

TEST_CASE("Szego block analysis") {
  SUBCASE("Rudin-Shapiro p = 1 witness") {
    auto r = szego_block_analysis(rudin(), 1, 4096);
    REQUIRE(r.blocks.size() == 1);
    REQUIRE(r.blocks[0].witness);
    const auto& w = *r.blocks[0].witness;
    CHECK(w.P == 0);
    CHECK(w.Q == 1);
    CHECK(w.L == 3);
    CHECK(verify(w, rudin()));
  }
  SUBCASE("period three is eventually periodic") {
    auto r = szego_block_analysis(periodic({1.0, 0.0, 0.0}), 8, 4096);
    CHECK(r.overall == SzegoOverall::EventuallyPeriodic);
    REQUIRE(r.periodicity);
    CHECK(r.periodicity->preperiod == 0);
    CHECK(r.periodicity->period == 3);
  }
  SUBCASE("random signs have a witness at every p") {
    const auto seq = random_signs(42, 1 << 16);
    auto r = szego_block_analysis(seq, 8, (1 << 16) - 1);
    CHECK(r.overall == SzegoOverall::MismatchAtEveryP);
    for (const auto& b : r.blocks) {
      REQUIRE(b.witness);
      CHECK(b.witness->L >= b.p + 1);
      CHECK(verify(*b.witness, seq));
    }
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(szego_block_analysis(hecke(), 2, 1000), std::invalid_argument);
    std::vector<Complex> many;
    for (int i = 0; i < 300; ++i) many.push_back(i);
    CHECK_THROWS_AS(szego_block_analysis(make_sequence(ExplicitSpec{many}), 2, 299),
                    std::invalid_argument);
  }
  SUBCASE("dichotomy on small eventually periodic inputs") {
    for (int pre = 0; pre <= 3; ++pre) {
      for (int per = 1; per <= 4; ++per) {
        std::vector<int> prefix(static_cast<std::size_t>(pre), 7), block;
        for (int i = 0; i < per; ++i) block.push_back(i == 0 ? 1 : 0);
        auto r = szego_block_analysis(eventually_periodic(prefix, block, 3000), 6, 2999);
        const bool every = r.overall == SzegoOverall::MismatchAtEveryP;
        const bool periodic_found = r.overall == SzegoOverall::EventuallyPeriodic;
        REQUIRE(every != periodic_found);
      }
    }
  }
}

TEST_CASE("eventual periodicity") {
  CHECK(detect_eventual_periodicity(eventually_periodic({5}, {1, 0}, 500), 8, 8, 400, 0.0)->preperiod == 1);
  CHECK(detect_eventual_periodicity(eventually_periodic({5}, {1, 0}, 500), 8, 8, 400, 0.0)->period == 2);
  auto one = detect_eventual_periodicity(periodic({1.0}), 8, 8, 400, 0.0);
  REQUIRE(one);
  CHECK(one->preperiod == 0);
  CHECK(one->period == 1);
  CHECK_FALSE(detect_eventual_periodicity(rudin(), 64, 64, 1 << 14, 0.0));
  CHECK_THROWS_AS(detect_eventual_periodicity(rudin(), 64, 64, 100, 0.0), std::invalid_argument);
  SUBCASE("all preperiods up to 5 and periods up to 6") {
    std::mt19937_64 rng(1);
    for (int pre = 0; pre <= 5; ++pre) {
      for (int per = 1; per <= 6; ++per) {
        // A block whose least period is exactly per, and a prefix that does not extend it.
        std::vector<int> block(static_cast<std::size_t>(per), 0);
        block[0] = 1;
        std::vector<int> prefix(static_cast<std::size_t>(pre), 0);
        if (pre > 0) prefix[static_cast<std::size_t>(pre - 1)] = 2;
        auto d = detect_eventual_periodicity(eventually_periodic(prefix, block, 2000), 16, 16, 1999, 0.0);
        REQUIRE(d);
        CHECK(d->preperiod == pre);
        CHECK(d->period == per);
      }
    }
  }
}

TEST_CASE("verdicts") {
  SUBCASE("factorial gaps") {
    VerdictConfig cfg;
    auto v = verdict(factorial_gaps(), cfg);
    REQUIRE(std::holds_alternative<StrongNaturalBoundaryEvidence>(v));
    const auto& s = std::get<StrongNaturalBoundaryEvidence>(v);
    REQUIRE(s.certificate);
    CHECK(s.certificate->kind == CertificateKind::GapZeroFlank);
    CHECK(verify(v, factorial_gaps(), cfg));
  }
  SUBCASE("period (1,1,0)") {
    auto v = verdict(periodic({1.0, 1.0, 0.0}));
    REQUIRE(std::holds_alternative<EventuallyPeriodic>(v));
    const auto& e = std::get<EventuallyPeriodic>(v);
    CHECK(e.periodicity.preperiod == 0);
    CHECK(e.periodicity.period == 3);
    REQUIRE_FALSE(e.rational.poles.empty());
    for (const auto& p : e.rational.poles) CHECK(3 % p.d == 0);
  }
  SUBCASE("Hecke rotation") {
    VerdictConfig cfg;
    auto v = verdict(hecke(), cfg);
    REQUIRE(std::holds_alternative<StrongNaturalBoundaryEvidence>(v));
    const auto& s = std::get<StrongNaturalBoundaryEvidence>(v);
    REQUIRE(s.certificate);
    CHECK(s.certificate->kind == CertificateKind::PairMismatch);
    CHECK(verify(v, hecke(), cfg));
  }
  SUBCASE("names") {
    CHECK(std::string(verdict_name(Verdict{Inconclusive{}})) == "Inconclusive");
  }
}

TEST_CASE("searches are prefix-stable in the horizon") {
  const auto seq = random_signs(21, 20000);
  auto small = find_pair_certificate(seq, 3, 5000, 0.0, 1.0, FlankSide::Backward);
  auto large = find_pair_certificate(seq, 3, 19999, 0.0, 1.0, FlankSide::Backward);
  REQUIRE(small.certificate);
  REQUIRE(large.certificate);
  for (const auto& p : small.pairs) {
    CHECK(std::find(large.pairs.begin(), large.pairs.end(), p) != large.pairs.end());
  }
  auto g1 = find_gap_certificate(factorial_gaps(), 4, 1000, 0.0, 0.5);
  auto g2 = find_gap_certificate(factorial_gaps(), 4, 100000, 0.0, 0.5);
  REQUIRE(g1);
  REQUIRE(g2);
  CHECK(std::includes(g2->hits.begin(), g2->hits.end(), g1->hits.begin(), g1->hits.end()));
}

TEST_CASE("results do not depend on the worker count") {
  const auto seq = hecke();
  setenv("NBSCOPE_THREADS", "1", 1);
  auto a = extract_right_limits(seq, 3, 20000, 0.05, 100);
  auto pa = enumerate_pair_matches(seq, 3, 20000, 0.05, 0.5, FlankSide::Forward);
  setenv("NBSCOPE_THREADS", "7", 1);
  auto b = extract_right_limits(seq, 3, 20000, 0.05, 100);
  auto pb = enumerate_pair_matches(seq, 3, 20000, 0.05, 0.5, FlankSide::Forward);
  unsetenv("NBSCOPE_THREADS");
  REQUIRE(a.candidates.size() == b.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    CHECK(a.candidates[i].recurrence_indices == b.candidates[i].recurrence_indices);
  }
  CHECK(pa == pb);
}
