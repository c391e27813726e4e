#include <nbscope/right_limits.hpp>

#include "detail.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace nbscope {

using detail::reject;

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  return h ^ (h >> 29);
}

std::uint64_t bits(double x) { return x == 0.0 ? 0 : std::bit_cast<std::uint64_t>(x); }

Index cell(double x, double width) { return static_cast<Index>(std::floor(x / width)); }

double sup_distance(const Complex* a, const Complex* b, std::size_t len) {
  double d = 0.0;
  for (std::size_t i = 0; i < len; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Coordinates (re, and im for complex sequences) of a contiguous slice.
void coordinates(const Complex* v, std::size_t len, bool real, std::vector<double>& out) {
  out.clear();
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(v[i].real());
    if (!real) out.push_back(v[i].imag());
  }
}

/// Hash keys of all grid cells that may hold a vector within eps (sup norm)
/// of `coords`, looking at the first `dims` coordinates. With eps = 0 the
/// single key covers every coordinate bit-exactly.
class CellHasher {
 public:
  CellHasher(double eps, std::size_t total_dims) : eps_(eps) {
    dims_ = eps > 0 ? std::min<std::size_t>(4, total_dims) : total_dims;
  }

  std::uint64_t own(const std::vector<double>& coords) const {
    std::uint64_t h = 0x51ed270b27e5c3a1ULL;
    for (std::size_t i = 0; i < dims_; ++i) {
      h = mix(h, eps_ > 0 ? static_cast<std::uint64_t>(cell(coords[i], eps_)) : bits(coords[i]));
    }
    return h;
  }

  void neighbours(const std::vector<double>& coords, std::vector<std::uint64_t>& out) const {
    out.clear();
    if (eps_ == 0) {
      out.push_back(own(coords));
      return;
    }
    std::vector<Index> base(dims_);
    for (std::size_t i = 0; i < dims_; ++i) base[i] = cell(coords[i], eps_);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < dims_; ++i) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
      std::uint64_t h = 0x51ed270b27e5c3a1ULL;
      std::size_t rest = c;
      for (std::size_t i = 0; i < dims_; ++i) {
        const auto offset = static_cast<Index>(rest % 3) - 1;
        rest /= 3;
        h = mix(h, static_cast<std::uint64_t>(base[i] + offset));
      }
      out.push_back(h);
    }
  }

 private:
  double eps_;
  std::size_t dims_;
};

void check_window_args(Index window, double eps, double delta) {
  if (window < 1) reject("flank width W must be >= 1");
  if (!(eps >= 0.0)) reject("eps must be >= 0");
  if (!(delta > 2 * eps)) reject("delta must exceed 2*eps (delta = ", delta, ", eps = ", eps, ")");
}

Index clamp_horizon(const OneSidedSequence& seq, Index horizon) {
  if (horizon < 0) reject("horizon must be >= 0");
  seq.require_extent(horizon, "horizon");
  return horizon;
}

/// First index of the flank slice for centre n.
Index flank_start(Index n, Index window, FlankSide side) {
  return side == FlankSide::Backward ? n - window : n + 1;
}

}  // namespace

const char* to_string(CertificateKind kind) {
  return kind == CertificateKind::GapZeroFlank ? "GapZeroFlank" : "PairMismatch";
}

const char* to_string(FlankSide side) { return side == FlankSide::Backward ? "backward" : "forward"; }

const char* to_string(SzegoOverall overall) {
  switch (overall) {
    case SzegoOverall::MismatchAtEveryP: return "mismatch-at-every-p";
    case SzegoOverall::EventuallyPeriodic: return "eventually-periodic";
    case SzegoOverall::HorizonExhausted: return "horizon-exhausted";
  }
  return "?";
}

// ---------------------------------------------------------------------------

RightLimitResult extract_right_limits(const OneSidedSequence& seq, Index window, Index horizon,
                                      double eps, std::size_t max_candidates,
                                      Index min_recurrence) {
  if (window < 1) reject("extract_right_limits: W must be >= 1");
  if (horizon < 10 * window) reject("extract_right_limits: horizon must be >= 10*W");
  if (!(eps >= 0.0)) reject("extract_right_limits: eps must be >= 0");
  if (min_recurrence < 1) reject("extract_right_limits: min_recurrence must be >= 1");
  clamp_horizon(seq, horizon);
  const std::vector<Complex> v = seq.values(0, horizon + 1);
  const auto len = static_cast<std::size_t>(2 * window + 1);
  const bool real = seq.is_real();
  const CellHasher hasher(eps, real ? len : 2 * len);

  struct Cluster {
    Index leader;
    std::vector<Index> members;
  };
  std::vector<Cluster> clusters;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  std::vector<double> coords;
  std::vector<std::uint64_t> keys;

  RightLimitResult result;
  for (Index n = window; n <= horizon - window; ++n) {
    ++result.windows_scanned;
    const Complex* w = v.data() + (n - window);
    coordinates(w, len, real, coords);
    hasher.neighbours(coords, keys);
    std::optional<std::size_t> best;
    for (std::uint64_t key : keys) {
      auto it = grid.find(key);
      if (it == grid.end()) continue;
      for (std::size_t c : it->second) {
        if (best && c >= *best) break;
        if (sup_distance(w, v.data() + (clusters[c].leader - window), len) <= eps) {
          best = c;
          break;
        }
      }
    }
    if (best) {
      clusters[*best].members.push_back(n);
      continue;
    }
    if (static_cast<Index>(clusters.size()) >= kMaxClusters) {
      result.truncated = true;
      break;
    }
    grid[hasher.own(coords)].push_back(clusters.size());
    clusters.push_back({n, {n}});
  }
  result.clusters_total = static_cast<Index>(clusters.size());

  std::vector<std::size_t> order(clusters.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return clusters[a].members.size() > clusters[b].members.size();
  });
  for (std::size_t c : order) {
    if (result.candidates.size() >= max_candidates) break;
    if (static_cast<Index>(clusters[c].members.size()) < min_recurrence) break;
    RightLimitCandidate cand;
    cand.window = nbscope::window(seq, clusters[c].leader, window);
    cand.window.provenance = clusters[c].members;
    cand.window.eps = eps;
    cand.recurrence_indices = std::move(clusters[c].members);
    cand.eps = eps;
    result.candidates.push_back(std::move(cand));
  }
  return result;
}

// ---------------------------------------------------------------------------

std::optional<NonReflectionlessCertificate> find_gap_certificate(const OneSidedSequence& seq,
                                                                 Index window, Index horizon,
                                                                 double eps, double delta,
                                                                 std::optional<Decay> decay,
                                                                 Index min_recurrence) {
  check_window_args(window, eps, delta);
  if (decay && (!(decay->C > 0) || !(decay->D > 0))) reject("decay constants must be > 0");
  clamp_horizon(seq, horizon);
  if (horizon < window) return std::nullopt;
  const std::vector<Complex> v = seq.values(0, horizon + 1);
  std::vector<double> limit(static_cast<std::size_t>(window) + 1, eps);
  if (decay) {
    for (Index k = 1; k <= window; ++k) {
      limit[static_cast<std::size_t>(k)] = decay->C * std::exp(-decay->D * static_cast<double>(k)) + eps;
    }
  }

  NonReflectionlessCertificate cert;
  cert.kind = CertificateKind::GapZeroFlank;
  cert.side = FlankSide::Backward;
  cert.flank_width = window;
  cert.eps = eps;
  cert.delta = delta;
  cert.decay = decay;
  double min_center = std::numeric_limits<double>::infinity();
  for (Index n = window; n <= horizon; ++n) {
    const double centre = std::abs(v[static_cast<std::size_t>(n)]);
    if (centre < delta) continue;
    bool quiet = true;
    for (Index k = 1; k <= window && quiet; ++k) {
      quiet = std::abs(v[static_cast<std::size_t>(n - k)]) <= limit[static_cast<std::size_t>(k)];
    }
    if (!quiet) continue;
    cert.hits.push_back(n);
    min_center = std::min(min_center, centre);
  }
  if (static_cast<Index>(cert.hits.size()) < min_recurrence) return std::nullopt;
  cert.min_separation = min_center;
  return cert;
}

bool pair_qualifies(const OneSidedSequence& seq, Index n, Index m, Index window, double eps,
                    double delta, FlankSide side) {
  if (n < 0 || m < 0 || n == m) return false;
  if (side == FlankSide::Backward && std::min(n, m) < window) return false;
  if (std::abs(seq(n) - seq(m)) < delta) return false;
  for (Index k = 1; k <= window; ++k) {
    const Index off = side == FlankSide::Backward ? -k : k;
    if (std::abs(seq(n + off) - seq(m + off)) > eps) return false;
  }
  return true;
}

namespace {

struct PairIndex {
  struct Sub {
    Index cx = 0, cy = 0;
    std::vector<Index> items;
    std::size_t head = 0;
  };
  std::unordered_map<std::uint64_t, std::vector<Sub>> buckets;

  Sub& sub(std::uint64_t key, Index cx, Index cy) {
    auto& subs = buckets[key];
    for (Sub& s : subs) {
      if (s.cx == cx && s.cy == cy) return s;
    }
    subs.push_back({cx, cy, {}, 0});
    return subs.back();
  }
};

struct PairScan {
  const std::vector<Complex>& v;
  Index window;
  double eps;
  double delta;
  FlankSide side;

  bool flank_match(Index n, Index m) const {
    const Complex* a = v.data() + flank_start(n, window, side);
    const Complex* b = v.data() + flank_start(m, window, side);
    return sup_distance(a, b, static_cast<std::size_t>(window)) <= eps;
  }
  bool qualifies(Index n, Index m) const {
    return std::abs(v[static_cast<std::size_t>(n)] - v[static_cast<std::size_t>(m)]) >= delta &&
           flank_match(n, m);
  }
};

}  // namespace

PairSearchResult find_pair_certificate(const OneSidedSequence& seq, Index window, Index horizon,
                                       double eps, double delta, FlankSide side,
                                       Index min_recurrence) {
  check_window_args(window, eps, delta);
  clamp_horizon(seq, horizon);
  const std::vector<Complex> v = seq.values(0, horizon + 1);
  const bool real = seq.is_real();
  const auto wlen = static_cast<std::size_t>(window);
  const CellHasher hasher(eps, real ? wlen : 2 * wlen);
  const double cw = delta / 2;
  const PairScan scan{v, window, eps, delta, side};

  const Index first = side == FlankSide::Backward ? window : 0;
  const Index last = side == FlankSide::Backward ? horizon : horizon - window;

  PairSearchResult result;
  PairIndex index;
  std::vector<char> used(static_cast<std::size_t>(horizon + 1), 0);
  std::vector<double> coords;
  std::vector<std::uint64_t> keys;

  for (Index m = first; m <= last; ++m) {
    coordinates(v.data() + flank_start(m, window, side), wlen, real, coords);
    const Complex am = v[static_cast<std::size_t>(m)];
    const Index mx = cell(am.real(), cw), my = cell(am.imag(), cw);
    hasher.neighbours(coords, keys);

    std::optional<Index> best;
    std::size_t scanned = 0;
    for (std::uint64_t key : keys) {
      auto it = index.buckets.find(key);
      if (it == index.buckets.end()) continue;
      for (PairIndex::Sub& s : it->second) {
        if (s.cx == mx && s.cy == my) continue;
        while (s.head < s.items.size() && used[static_cast<std::size_t>(s.items[s.head])]) ++s.head;
        for (std::size_t i = s.head; i < s.items.size(); ++i) {
          const Index n = s.items[i];
          if (best && n >= *best) break;
          if (used[static_cast<std::size_t>(n)]) continue;
          if (++scanned > kBucketScanCap) {
            result.overflow = true;
            break;
          }
          if (scan.qualifies(n, m)) {
            best = n;
            break;
          }
        }
      }
    }
    if (best) {
      used[static_cast<std::size_t>(*best)] = 1;
      used[static_cast<std::size_t>(m)] = 1;
      result.pairs.emplace_back(*best, m);
    } else {
      index.sub(hasher.own(coords), mx, my).items.push_back(m);
    }
  }

  std::sort(result.pairs.begin(), result.pairs.end());
  if (static_cast<Index>(result.pairs.size()) >= min_recurrence) {
    NonReflectionlessCertificate cert;
    cert.kind = CertificateKind::PairMismatch;
    cert.pairs = result.pairs;
    cert.side = side;
    cert.flank_width = window;
    cert.eps = eps;
    cert.delta = delta;
    cert.min_separation = std::numeric_limits<double>::infinity();
    for (auto [n, m] : cert.pairs) {
      cert.min_separation = std::min(cert.min_separation,
                                     std::abs(v[static_cast<std::size_t>(n)] - v[static_cast<std::size_t>(m)]));
    }
    result.certificate = std::move(cert);
  }
  return result;
}

std::vector<std::pair<Index, Index>> enumerate_pair_matches(const OneSidedSequence& seq,
                                                            Index window, Index horizon,
                                                            double eps, double delta,
                                                            FlankSide side, std::size_t max_pairs) {
  check_window_args(window, eps, delta);
  clamp_horizon(seq, horizon);
  const std::vector<Complex> v = seq.values(0, horizon + 1);
  const bool real = seq.is_real();
  const auto wlen = static_cast<std::size_t>(window);
  const CellHasher hasher(eps, real ? wlen : 2 * wlen);
  const PairScan scan{v, window, eps, delta, side};
  const Index first = side == FlankSide::Backward ? window : 0;
  const Index last = side == FlankSide::Backward ? horizon : horizon - window;

  std::unordered_map<std::uint64_t, std::vector<Index>> grid;
  std::vector<std::pair<Index, Index>> out;
  std::vector<double> coords;
  std::vector<std::uint64_t> keys;
  for (Index m = first; m <= last && out.size() < max_pairs; ++m) {
    coordinates(v.data() + flank_start(m, window, side), wlen, real, coords);
    hasher.neighbours(coords, keys);
    for (std::uint64_t key : keys) {
      auto it = grid.find(key);
      if (it == grid.end()) continue;
      for (Index n : it->second) {
        if (scan.qualifies(n, m)) out.emplace_back(n, m);
      }
    }
    grid[hasher.own(coords)].push_back(m);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() > max_pairs) out.resize(max_pairs);
  return out;
}

bool verify(const NonReflectionlessCertificate& cert, const OneSidedSequence& seq) {
  if (!(cert.delta > 2 * cert.eps) || cert.flank_width < 1) return false;
  const Index W = cert.flank_width;
  if (cert.kind == CertificateKind::GapZeroFlank) {
    if (cert.hits.empty() || !cert.pairs.empty()) return false;
    for (std::size_t i = 0; i < cert.hits.size(); ++i) {
      const Index n = cert.hits[i];
      if (i > 0 && n <= cert.hits[i - 1]) return false;
      if (n < W) return false;
      if (std::abs(seq(n)) < cert.delta) return false;
      for (Index k = 1; k <= W; ++k) {
        double limit = cert.eps;
        if (cert.decay) limit += cert.decay->C * std::exp(-cert.decay->D * static_cast<double>(k));
        if (std::abs(seq(n - k)) > limit) return false;
      }
    }
    return true;
  }
  if (cert.pairs.empty() || !cert.hits.empty()) return false;
  std::vector<Index> seen;
  for (std::size_t i = 0; i < cert.pairs.size(); ++i) {
    const auto [n, m] = cert.pairs[i];
    if (!(n < m)) return false;
    if (i > 0 && n <= cert.pairs[i - 1].first) return false;
    if (!pair_qualifies(seq, n, m, W, cert.eps, cert.delta, cert.side)) return false;
    seen.push_back(n);
    seen.push_back(m);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxValueSet = 256;

std::vector<Complex> finite_value_set(const std::vector<Complex>& v) {
  std::vector<Complex> set;
  for (const Complex& x : v) {
    if (std::find(set.begin(), set.end(), x) != set.end()) continue;
    set.push_back(x);
    if (set.size() > kMaxValueSet) {
      reject("sequence takes more than ", kMaxValueSet, " distinct values; not finite-valued");
    }
  }
  std::sort(set.begin(), set.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return set;
}

/// #V^p + 1 with saturation.
Index blocks_needed(std::size_t values, Index p) {
  Index n = 1;
  for (Index i = 0; i < p; ++i) {
    if (n > (Index{1} << 40) / static_cast<Index>(values)) return Index{1} << 40;
    n *= static_cast<Index>(values);
  }
  return n + 1;
}

std::optional<Periodicity> periodicity_of(const std::vector<Complex>& v, Index max_period,
                                          Index max_preperiod, double tol) {
  const auto horizon = static_cast<Index>(v.size()) - 1;
  std::optional<Periodicity> best;
  for (Index T = 1; T <= max_period; ++T) {
    Index pre = 0;
    for (Index n = horizon - T; n >= 0; --n) {
      if (std::abs(v[static_cast<std::size_t>(n + T)] - v[static_cast<std::size_t>(n)]) > tol) {
        pre = n + 1;
        break;
      }
    }
    if (pre > max_preperiod) continue;
    if (!best || pre < best->preperiod) best = Periodicity{pre, T};
  }
  return best;
}

}  // namespace

std::optional<Periodicity> detect_eventual_periodicity(const OneSidedSequence& seq,
                                                       Index max_period, Index max_preperiod,
                                                       Index horizon, double tol) {
  if (max_period < 1 || max_preperiod < 0) reject("periodicity: need max_period >= 1, max_preperiod >= 0");
  if (!(tol >= 0.0)) reject("periodicity: tol must be >= 0");
  if (horizon < max_preperiod + 2 * max_period) {
    reject("periodicity: horizon must be >= max_preperiod + 2*max_period");
  }
  clamp_horizon(seq, horizon);
  return periodicity_of(seq.values(0, horizon + 1), max_period, max_preperiod, tol);
}

bool verify(const SzegoWitness& w, const OneSidedSequence& seq) {
  if (w.p < 1 || w.L < w.p + 1 || w.P < 0 || !(w.P < w.Q)) return false;
  auto a = [&](Index k) { return seq(k - 1); };  // 1-indexed
  for (Index j = 1; j <= w.p; ++j) {
    if (a(w.P + j) != a(w.Q + j)) return false;
  }
  return a(w.Q + w.L) != a(w.P + w.L);
}

SzegoReport szego_block_analysis(const OneSidedSequence& seq, Index p_max, Index horizon) {
  if (!seq.is_exact()) reject("Szego analysis needs exact-valued input");
  if (p_max < 1) reject("Szego analysis: p_max must be >= 1");
  if (horizon < 2) reject("Szego analysis: horizon must be >= 2");
  clamp_horizon(seq, horizon - 1);
  // v[k - 1] = a_k for k = 1..horizon.
  const std::vector<Complex> v = seq.values(0, horizon);
  SzegoReport report;
  report.horizon = horizon;
  report.value_set = finite_value_set(v);

  bool all_witnessed = true;
  for (Index p = 1; p <= p_max; ++p) {
    SzegoBlockResult block;
    block.p = p;
    const Index available = horizon / p;
    const Index needed = blocks_needed(report.value_set.size(), p);
    if (available < needed) {
      block.outcome = SzegoOutcome::Skipped;
      block.note = std::to_string(available) + " blocks available, " + std::to_string(needed) +
                   " needed";
      all_witnessed = false;
      report.blocks.push_back(std::move(block));
      continue;
    }
    std::unordered_map<std::uint64_t, std::vector<Index>> seen;
    std::optional<std::pair<Index, Index>> recurrence;
    for (Index l = 0; l < available && !recurrence; ++l) {
      std::uint64_t h = 0x2545f4914f6cdd1dULL;
      for (Index j = 0; j < p; ++j) {
        const Complex x = v[static_cast<std::size_t>(l * p + j)];
        h = mix(mix(h, bits(x.real())), bits(x.imag()));
      }
      auto& list = seen[h];
      for (Index l0 : list) {
        if (std::equal(v.begin() + l0 * p, v.begin() + (l0 + 1) * p, v.begin() + l * p)) {
          recurrence = std::make_pair(l0, l);
          break;
        }
      }
      list.push_back(l);
    }
    // The pigeonhole argument guarantees a recurrence here.
    const Index P = recurrence->first * p, Q = recurrence->second * p;
    std::optional<Index> L;
    for (Index l = p + 1; Q + l <= horizon; ++l) {
      if (v[static_cast<std::size_t>(Q + l - 1)] != v[static_cast<std::size_t>(P + l - 1)]) {
        L = l;
        break;
      }
    }
    if (L) {
      block.outcome = SzegoOutcome::Witness;
      block.witness = SzegoWitness{p, P, Q, *L};
    } else {
      block.outcome = SzegoOutcome::NoMismatchWithinHorizon;
      block.note = "blocks at P = " + std::to_string(P) + " and Q = " + std::to_string(Q) +
                   " agree up to the horizon";
      all_witnessed = false;
    }
    report.blocks.push_back(std::move(block));
  }

  if (all_witnessed) {
    report.overall = SzegoOverall::MismatchAtEveryP;
    return report;
  }
  const std::vector<Complex> full = seq.values(0, horizon);
  const Index span = horizon - 1;
  const Index max_period = std::min<Index>(64, span / 3);
  const Index max_preperiod = std::min<Index>(64, span - 2 * max_period);
  if (max_period >= 1) {
    report.periodicity = periodicity_of(full, max_period, max_preperiod, 0.0);
  }
  report.overall = report.periodicity ? SzegoOverall::EventuallyPeriodic : SzegoOverall::HorizonExhausted;
  return report;
}

// ---------------------------------------------------------------------------

const char* verdict_name(const Verdict& v) {
  struct {
    const char* operator()(const StrongNaturalBoundaryEvidence&) const {
      return "StrongNaturalBoundaryEvidence";
    }
    const char* operator()(const NaturalBoundaryEvidence&) const { return "NaturalBoundaryEvidence"; }
    const char* operator()(const EventuallyPeriodic&) const { return "EventuallyPeriodic"; }
    const char* operator()(const Inconclusive&) const { return "Inconclusive"; }
  } name;
  return std::visit(name, v);
}

namespace {

struct Resolved {
  Index horizon;
  double eps;
  double tol;
  Index max_period;
  Index max_preperiod;
};

Resolved resolve(const OneSidedSequence& seq, const VerdictConfig& c) {
  Resolved r{};
  r.horizon = c.horizon;
  if (auto ext = seq.extent()) r.horizon = std::min(r.horizon, *ext - 1);
  if (r.horizon < 2) reject("verdict: horizon must be >= 2");
  r.eps = c.eps.value_or(seq.is_exact() ? 0.0 : 0.05);
  r.tol = c.periodicity_tol.value_or(seq.is_exact() ? 0.0 : 1e-9);
  r.max_period = std::max<Index>(1, std::min(c.max_period, r.horizon / 3));
  r.max_preperiod = std::max<Index>(0, std::min(c.max_preperiod, r.horizon - 2 * r.max_period));
  return r;
}

}  // namespace

Verdict verdict(const OneSidedSequence& seq, const VerdictConfig& config) {
  const Resolved r = resolve(seq, config);
  check_window_args(config.window, r.eps, config.delta);
  Inconclusive inconclusive;

  if (auto per = detect_eventual_periodicity(seq, r.max_period, r.max_preperiod, r.horizon, r.tol)) {
    const auto prefix = seq.values(0, per->preperiod);
    const auto block = seq.values(per->preperiod, per->preperiod + per->period);
    return EventuallyPeriodic{*per, eventually_periodic_form(prefix, block)};
  }
  inconclusive.probes.push_back("eventual periodicity (period <= " + std::to_string(r.max_period) +
                                ", preperiod <= " + std::to_string(r.max_preperiod) + ")");

  if (auto gap = find_gap_certificate(seq, config.window, r.horizon, r.eps, config.delta,
                                      std::nullopt, config.min_recurrence)) {
    return StrongNaturalBoundaryEvidence{std::move(gap), {}};
  }
  inconclusive.probes.push_back("gap certificate");
  for (FlankSide side : {FlankSide::Backward, FlankSide::Forward}) {
    PairSearchResult pair = find_pair_certificate(seq, config.window, r.horizon, r.eps,
                                                  config.delta, side, config.min_recurrence);
    if (pair.certificate) return StrongNaturalBoundaryEvidence{std::move(pair.certificate), {}};
    inconclusive.probes.push_back(std::string("pair certificate (") + to_string(side) + " flank)");
  }

  if (seq.is_exact()) {
    std::optional<SzegoReport> szego;
    try {
      szego = szego_block_analysis(seq, config.p_max, r.horizon);
    } catch (const std::invalid_argument&) {
      inconclusive.probes.push_back("Szego block analysis (input not finite-valued)");
    }
    if (szego) {
      if (szego->overall == SzegoOverall::MismatchAtEveryP) {
        StrongNaturalBoundaryEvidence strong;
        for (const auto& b : szego->blocks) strong.szego_witnesses.push_back(*b.witness);
        return strong;
      }
      inconclusive.probes.push_back(std::string("Szego block analysis (") +
                                    to_string(szego->overall) + ")");
    }
  }
  inconclusive.reason = "no periodicity, certificate or Szego mismatch within horizon " +
                        std::to_string(r.horizon);
  return inconclusive;
}

bool verify(const Verdict& v, const OneSidedSequence& seq, const VerdictConfig& config) {
  if (const auto* s = std::get_if<StrongNaturalBoundaryEvidence>(&v)) {
    if (!s->certificate && s->szego_witnesses.empty()) return false;
    if (s->certificate && !verify(*s->certificate, seq)) return false;
    for (const auto& w : s->szego_witnesses) {
      if (!verify(w, seq)) return false;
    }
    return true;
  }
  if (const auto* n = std::get_if<NaturalBoundaryEvidence>(&v)) return verify(n->certificate, seq);
  if (const auto* e = std::get_if<EventuallyPeriodic>(&v)) {
    const Resolved r = resolve(seq, config);
    const auto& p = e->periodicity;
    for (Index n = p.preperiod; n + p.period <= r.horizon; ++n) {
      if (std::abs(seq(n + p.period) - seq(n)) > r.tol) return false;
    }
    return true;
  }
  return true;
}

}  // namespace nbscope
