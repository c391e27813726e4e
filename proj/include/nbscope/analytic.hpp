// Certified evaluation of power series inside and outside the unit circle,
// the shift identity, arc L1 scans, and reflectionless decision rules.

#pragma once

#include <nbscope/polynomial.hpp>
#include <nbscope/sequence.hpp>

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nbscope {

inline constexpr Index kMaxTerms = 100000000;

/// Least N with A r^N / (1 - r) <= tol; 0 when tol >= A / (1 - r).
Index truncation_length(double bound, double r, double tol);

struct EvalResult {
  Complex value;
  /// Geometric tail bound plus a rounding bound for the computed sum.
  double abs_error_bound = 0.0;
  /// The geometric tail alone: A|z|^N/(1-|z|) inside, A|z|^-(N+1)/(1-|z|^-1) outside.
  double truncation_bound = 0.0;
  Index terms_used = 0;
};

/// f(z) = sum a_n z^n for |z| <= 1 - 1e-9. Throws NumericCapError if more
/// than kMaxTerms terms would be needed.
EvalResult eval_f(const OneSidedSequence& seq, Complex z, double tol);

/// Sum of the first `terms` terms with a rounding bound (truncation_bound 0).
EvalResult eval_partial(const OneSidedSequence& seq, Index first, Index terms, Complex z);

struct ShiftPair {
  EvalResult plus;    // f_+^{(N)}(z) = sum_{n>=0} a_{n+N} z^n
  EvalResult minus;   // f_-^{(N)}(z) = sum_{n=-N}^{-1} a_{n+N} z^n, finite
  EvalResult scaled;  // z^{-N} f(z) summed to N + plus.terms_used terms
  double identity_residual = 0.0;
  double combined_error_bound = 0.0;
};

ShiftPair eval_shift_pair(const OneSidedSequence& seq, Index N, Complex z, double tol);

/// Exact shift identity for exact-valued sequences at rational z = re + i im.
struct ExactShiftPair {
  Rational plus_re, plus_im;
  Rational minus_re, minus_im;
  Rational scaled_re, scaled_im;
  Rational residual_re, residual_im;
  Index terms = 0;
};

ExactShiftPair eval_shift_pair_exact(const OneSidedSequence& seq, Index N, const Rational& z_re,
                                     const Rational& z_im, Index terms);

// ---------------------------------------------------------------------------
// Two-sided sequences

/// b_n for all integers n with sup |b_n| <= bound. Support may be finite.
struct TwoSidedSequence {
  std::function<Complex(Index)> eval;
  double bound = 0.0;
  /// Inclusive index range outside which b_n = 0, when known.
  std::optional<Index> min_index;
  std::optional<Index> max_index;

  static TwoSidedSequence zero_padded(const TwoSidedWindow& w);
  static TwoSidedSequence periodic(std::vector<Complex> pattern);
  static TwoSidedSequence from_function(std::function<Complex(Index)> eval, double bound);
};

enum class Branch { Inside, Outside };

/// f_+(z) = sum_{n>=0} b_n z^n for |z| < 1 or f_-(z) = sum_{n<=-1} b_n z^n
/// for |z| > 1, selected by |z|.
EvalResult eval_two_sided(const TwoSidedSequence& b, Complex z, double tol);

// ---------------------------------------------------------------------------
// Arc L1 scan

struct ArcSpec {
  double alpha = 0.0;
  double beta = 0.0;
  bool full = false;

  static ArcSpec full_circle();
  static ArcSpec open(double alpha, double beta);
  double width() const;
  /// True when angle lies on the closed arc (mod 2 pi, within tol).
  bool contains(double angle, double tol = 1e-12) const;
};

struct RadiusIntegral {
  double r = 0.0;
  double integral = 0.0;
  double quad_err = 0.0;
  double trunc_err = 0.0;
  Index terms = 0;
  bool skipped = false;
  std::string skip_reason;
};

struct GrowthFit {
  double intercept = 0.0;
  double slope = 0.0;        // against log(1/(1-r))
  double rel_residual = 0.0; // ||I - fit||_2 / ||I||_2
  std::size_t points = 0;
};

struct BoundaryProbeReport {
  ArcSpec arc;
  Index quad_points = 0;
  double tol = 0.0;
  std::vector<RadiusIntegral> radii;
  std::optional<GrowthFit> growth_fit;
};

/// I(r) = int_arc |f(r e^{i theta})| d theta / 2 pi by the composite midpoint
/// rule at M and 2M nodes; reports the 2M value with |I_2M - I_M| as the
/// quadrature error. Nodes: theta_j = alpha + (j + 1/2)(beta - alpha)/M.
BoundaryProbeReport boundary_l1_scan(const OneSidedSequence& seq, const ArcSpec& arc,
                                     const std::vector<double>& radii, Index quad_points,
                                     double tol);

/// |f(r e^{i theta_j})| at the M midpoint nodes of the arc, each truncated
/// at `terms` terms.
std::vector<double> arc_modulus_samples(const OneSidedSequence& seq, const ArcSpec& arc, double r,
                                        Index quad_points, Index terms);

std::optional<GrowthFit> fit_growth(const std::vector<RadiusIntegral>& radii);

// ---------------------------------------------------------------------------
// Reflectionless checks

struct ReflectionlessCheck {
  bool pass = false;
  std::string reason;
  RationalForm reduced;
  std::vector<RootOfUnity> poles_on_arc;
  double max_numeric_residual = 0.0;
  double max_allowed_residual = 0.0;
  std::size_t samples = 0;
};

/// f_+ = P(z) / (1 - z^p) reduced over the cyclotomic factors; passes when
/// no surviving pole is on the closed arc and f_+ + f_- vanishes numerically
/// at 50 points with 1 < |z| < 2 near the arc.
ReflectionlessCheck periodic_reflectionless_check(const std::vector<Complex>& pattern,
                                                  const ArcSpec& arc);

enum class DecaySide { Positive, Negative };

struct DecayRuleResult {
  bool not_reflectionless = false;
  Index witness = 0;
  double witness_abs = 0.0;
};

/// b_n supplied on [-W, W] with |b_n| <= C e^{-D|n|} on the claimed side.
/// Any |b_n| >= delta (first in ascending index) rules out reflectionless
/// on every arc; otherwise the window is consistent with b = 0.
DecayRuleResult decay_rule_check(const TwoSidedWindow& b, DecaySide side, double C, double D,
                                 double delta);

}  // namespace nbscope
