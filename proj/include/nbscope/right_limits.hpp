// Finite-horizon right-limit search: recurring windows, non-reflectionless
// certificates, Szego block analysis, eventual periodicity and verdicts.
//
// Everything here is evidence gathered on a finite prefix. Certificates
// require at least min_recurrence strictly increasing witnesses; only
// EventuallyPeriodic on exact-valued input is verified on the whole horizon.

#pragma once

#include <nbscope/polynomial.hpp>
#include <nbscope/sequence.hpp>

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nbscope {

// ---------------------------------------------------------------------------
// Right-limit candidates

struct RightLimitCandidate {
  TwoSidedWindow window;  // the cluster leader
  std::vector<Index> recurrence_indices;
  double eps = 0.0;
};

struct RightLimitResult {
  std::vector<RightLimitCandidate> candidates;
  Index windows_scanned = 0;
  Index clusters_total = 0;
  bool truncated = false;  // cluster cap reached; later windows were not clustered
};

inline constexpr Index kMaxClusters = 1000000;

/// Greedy leader clustering of all windows centred in [W, horizon - W] under
/// the sup metric: each window joins the earliest-created cluster within eps.
RightLimitResult extract_right_limits(const OneSidedSequence& seq, Index window, Index horizon,
                                      double eps, std::size_t max_candidates,
                                      Index min_recurrence = 3);

// ---------------------------------------------------------------------------
// Certificates

enum class CertificateKind { GapZeroFlank, PairMismatch };
enum class FlankSide { Backward, Forward };

const char* to_string(CertificateKind kind);
const char* to_string(FlankSide side);

struct Decay {
  double C = 1.0;
  double D = 1.0;
};

struct NonReflectionlessCertificate {
  CertificateKind kind = CertificateKind::GapZeroFlank;
  std::vector<Index> hits;                     // GapZeroFlank centres
  std::vector<std::pair<Index, Index>> pairs;  // PairMismatch (n, m), n < m
  FlankSide side = FlankSide::Backward;
  Index flank_width = 0;  // offsets 1..W on the chosen side
  double eps = 0.0;
  double delta = 0.0;               // requested centre threshold
  double min_separation = 0.0;      // smallest centre gap actually achieved
  std::optional<Decay> decay;
};

/// Re-reads raw sequence values and checks every witness.
bool verify(const NonReflectionlessCertificate& cert, const OneSidedSequence& seq);

std::optional<NonReflectionlessCertificate> find_gap_certificate(
    const OneSidedSequence& seq, Index window, Index horizon, double eps, double delta,
    std::optional<Decay> decay = std::nullopt, Index min_recurrence = 3);

struct PairSearchResult {
  std::optional<NonReflectionlessCertificate> certificate;
  std::vector<std::pair<Index, Index>> pairs;  // all disjoint pairs found
  bool overflow = false;                       // a bucket scan hit the per-lookup cap
};

inline constexpr std::size_t kBucketScanCap = 1 << 16;

/// Greedy disjoint pairing in ascending index order: each centre m is paired
/// with the smallest unused n < m whose flank agrees within eps and whose
/// centre differs by at least delta. Quantised flank hashing, exact confirm.
PairSearchResult find_pair_certificate(const OneSidedSequence& seq, Index window, Index horizon,
                                       double eps, double delta, FlankSide side,
                                       Index min_recurrence = 3);

/// Every qualifying pair (n, m), not necessarily disjoint, up to max_pairs.
std::vector<std::pair<Index, Index>> enumerate_pair_matches(const OneSidedSequence& seq,
                                                            Index window, Index horizon,
                                                            double eps, double delta,
                                                            FlankSide side,
                                                            std::size_t max_pairs = 1 << 20);

bool pair_qualifies(const OneSidedSequence& seq, Index n, Index m, Index window, double eps,
                    double delta, FlankSide side);

// ---------------------------------------------------------------------------
// Szego block analysis and eventual periodicity

/// Witness in the 1-indexed block convention a_k = seq(k - 1):
/// a_{P+j} = a_{Q+j} for j = 1..p and a_{Q+L} != a_{P+L}, with L >= p + 1.
struct SzegoWitness {
  Index p = 0;
  Index P = 0;
  Index Q = 0;
  Index L = 0;
};

enum class SzegoOutcome { Witness, NoMismatchWithinHorizon, Skipped };

struct SzegoBlockResult {
  Index p = 0;
  SzegoOutcome outcome = SzegoOutcome::Skipped;
  std::optional<SzegoWitness> witness;
  std::string note;
};

enum class SzegoOverall { MismatchAtEveryP, EventuallyPeriodic, HorizonExhausted };

struct Periodicity {
  Index preperiod = 0;
  Index period = 1;
};

struct SzegoReport {
  std::vector<Complex> value_set;
  std::vector<SzegoBlockResult> blocks;
  SzegoOverall overall = SzegoOverall::HorizonExhausted;
  std::optional<Periodicity> periodicity;
  Index horizon = 0;
};

const char* to_string(SzegoOverall overall);

bool verify(const SzegoWitness& w, const OneSidedSequence& seq);

SzegoReport szego_block_analysis(const OneSidedSequence& seq, Index p_max, Index horizon);

/// Lexicographically least (preperiod, period) with |a_{n+period} - a_n| <= tol
/// for all n in [preperiod, horizon - period].
std::optional<Periodicity> detect_eventual_periodicity(const OneSidedSequence& seq,
                                                       Index max_period, Index max_preperiod,
                                                       Index horizon, double tol);

// ---------------------------------------------------------------------------
// Verdict

struct VerdictConfig {
  Index window = 5;
  Index horizon = 100000;
  std::optional<double> eps;  // default: 0 for exact input, 0.05 otherwise
  double delta = 0.5;
  Index min_recurrence = 3;
  Index p_max = 8;
  Index max_period = 64;
  Index max_preperiod = 64;
  std::optional<double> periodicity_tol;  // default: 0 exact, 1e-9 float
};

struct StrongNaturalBoundaryEvidence {
  std::optional<NonReflectionlessCertificate> certificate;
  std::vector<SzegoWitness> szego_witnesses;
};

/// Weaker tier kept for report compatibility; the pipeline emits only the
/// strong form because every certificate it finds upgrades to it.
struct NaturalBoundaryEvidence {
  NonReflectionlessCertificate certificate;
};

struct EventuallyPeriodic {
  Periodicity periodicity;
  RationalForm rational;
};

struct Inconclusive {
  std::string reason;
  std::vector<std::string> probes;
};

using Verdict =
    std::variant<StrongNaturalBoundaryEvidence, NaturalBoundaryEvidence, EventuallyPeriodic, Inconclusive>;

const char* verdict_name(const Verdict& v);

Verdict verdict(const OneSidedSequence& seq, const VerdictConfig& config = {});

/// Re-checks every embedded certificate or witness against raw values.
bool verify(const Verdict& v, const OneSidedSequence& seq, const VerdictConfig& config = {});

}  // namespace nbscope
