// Bounded coefficient sequences a_0, a_1, ... and the generator families used
// throughout the library.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nbscope {

using Complex = std::complex<double>;
using Index = std::int64_t;

enum class ValueKind { ExactInteger, ExactRational, Float };

const char* to_string(ValueKind kind);

/// Thrown when an evaluation would exceed a hard numeric cap (term count,
/// cluster count). Distinct from precondition failures.
class NumericCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real number stored as an unevaluated sum hi + lo, |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble from(long double x);
  /// Accepts decimal literals and the named constants sqrt2, sqrt2-1,
  /// golden, golden-1 (evaluated in extended precision).
  static DoubleDouble parse(const std::string& text);
  long double value() const { return static_cast<long double>(hi) + lo; }
};

/// Rejects q within 1e-12 of a rational p/d with d <= max_denominator.
bool looks_irrational(const DoubleDouble& q, std::int64_t max_denominator = 1000000,
                      double tolerance = 1e-12);

/// frac(n*q + theta) in [0, 1), accumulating n*q in double-double.
double rotation_phase(Index n, const DoubleDouble& q, double theta);

// ---------------------------------------------------------------------------
// Generator specifications

struct PeriodicSpec {
  std::vector<Complex> pattern;
};

enum class ExponentSet { Factorials, Squares, PowersOfTwo, Explicit };

struct GapPowersSpec {
  ExponentSet set = ExponentSet::Factorials;
  std::vector<Index> exponents;  // only for ExponentSet::Explicit, strictly increasing
  Complex fill{1.0, 0.0};
};

struct RudinShapiroSpec {};

enum class BoundaryFn { FractionalPart, HalfStep, Constant };

/// a_n = g(frac(n*q + theta)); theta is measured in turns.
struct RotationSpec {
  BoundaryFn fn = BoundaryFn::FractionalPart;
  double constant = 0.0;  // value for BoundaryFn::Constant
  DoubleDouble q;
  double theta = 0.0;
};

enum class ErdosEdge { Hard, Soft };

/// Vanishes on U = union over j >= 2 of [j!, j!+j].
struct ErdosSpec {
  ErdosEdge edge = ErdosEdge::Hard;
};

struct ExplicitSpec {
  std::vector<Complex> values;
};

struct ProcessSpec;

struct StochasticSpec {
  std::shared_ptr<const ProcessSpec> process;
  Index length = 0;
};

using GeneratorSpec = std::variant<PeriodicSpec, GapPowersSpec, RudinShapiroSpec, RotationSpec,
                                   ErdosSpec, ExplicitSpec, StochasticSpec>;

// ---------------------------------------------------------------------------

/// Immutable, cheaply copyable handle to a bounded sequence. Every access
/// checks |a_n| <= bound. Finite sequences (explicit lists, CSV imports,
/// sampled paths) carry an extent and reject indices beyond it.
class OneSidedSequence {
 public:
  using Eval = std::function<Complex(Index)>;

  static OneSidedSequence from_function(Eval eval, double bound, ValueKind kind, bool real_valued,
                                        std::string label,
                                        std::optional<Index> extent = std::nullopt);

  Complex operator()(Index n) const;
  double bound() const { return impl_->bound; }
  ValueKind value_kind() const { return impl_->kind; }
  bool is_exact() const { return impl_->kind != ValueKind::Float; }
  bool is_real() const { return impl_->real_valued; }
  std::optional<Index> extent() const { return impl_->extent; }
  const std::string& label() const { return impl_->label; }

  /// Values a_begin .. a_{end-1}.
  std::vector<Complex> values(Index begin, Index end) const;

  /// Throws std::invalid_argument unless indices [0, last] are available.
  void require_extent(Index last, const char* what) const;

 private:
  struct Impl {
    Eval eval;
    double bound;
    ValueKind kind;
    bool real_valued;
    std::optional<Index> extent;
    std::string label;
  };
  explicit OneSidedSequence(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

OneSidedSequence make_sequence(const GeneratorSpec& spec);

std::string describe(const GeneratorSpec& spec);

bool is_factorial(Index n);
bool is_square(Index n);
bool in_erdos_gap_set(Index n);

// ---------------------------------------------------------------------------
// Two-sided windows

struct TwoSidedWindow {
  Index radius = 0;
  std::vector<Complex> values;  // b_{-W} .. b_{W}
  /// Either a single centre n, or the recurrence indices of a cluster.
  std::variant<Index, std::vector<Index>> provenance;
  double eps = 0.0;

  Complex at(Index k) const { return values.at(static_cast<std::size_t>(k + radius)); }
};

TwoSidedWindow window(const OneSidedSequence& seq, Index center, Index radius);

// ---------------------------------------------------------------------------
// Limit-point snapping

struct SnapReport {
  Index horizon = 0;
  double gamma = 0.0;
  /// First index from which |a_n - c_n| <= gamma holds up to the horizon.
  Index onset = 0;
  /// Indices where a_n was equidistant (within onset_tol) from two targets.
  std::vector<Index> ties;
};

struct SnapResult {
  OneSidedSequence snapped;
  SnapReport report;
};

SnapResult snap_to_limit_points(const OneSidedSequence& seq, std::span<const Complex> targets,
                                double onset_tol, Index horizon);

// ---------------------------------------------------------------------------
// CSV: header "n,re,im", 17 significant digits, ascending, no gaps.

void write_csv(std::ostream& out, const OneSidedSequence& seq, Index count);
OneSidedSequence read_csv(std::istream& in, const std::string& label = "csv");
OneSidedSequence load_csv(const std::string& path);

}  // namespace nbscope
