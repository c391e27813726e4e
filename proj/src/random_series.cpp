#include <nbscope/random_series.hpp>

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace nbscope {

using detail::reject;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Uniform double in [0, 1) from the top 53 bits; portable across libraries.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::size_t pick(const std::vector<double>& probabilities, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  // Rounding left u above the running total: take the last positive entry.
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0) return i;
  }
  return 0;
}

void check_probabilities(const std::vector<double>& p, const char* what) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) reject(what, ": probabilities must be finite and >= 0");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) reject(what, ": probabilities sum to ", total, ", not 1");
}

void check_bound(Complex v, double K, const char* what) {
  if (!(std::abs(v) <= K * (1 + 1e-12))) {
    reject(what, ": value (", v.real(), ", ", v.imag(), ") exceeds the bound K = ", K);
  }
}

std::vector<Complex> draw(const ProcessSpec& spec, Index length, std::uint64_t seed) {
  std::vector<Complex> out(static_cast<std::size_t>(length));
  Uniform u(seed);
  if (const auto* iid = std::get_if<IidProcess>(&spec.kind)) {
    if (const auto* d = std::get_if<DiscreteDistribution>(&iid->distribution)) {
      for (auto& v : out) v = d->support[pick(d->probabilities, u())];
    } else if (const auto* iv = std::get_if<UniformInterval>(&iid->distribution)) {
      for (auto& v : out) v = iv->lo + u() * (iv->hi - iv->lo);
    } else {
      const auto& disk = std::get<UniformDisk>(iid->distribution);
      for (auto& v : out) {
        const double rho = disk.radius * std::sqrt(u());
        v = std::polar(rho, 2 * std::numbers::pi * u());
      }
    }
  } else if (const auto* mk = std::get_if<MarkovProcess>(&spec.kind)) {
    const std::size_t states = mk->emission.size();
    auto state = std::min(static_cast<std::size_t>(u() * static_cast<double>(states)), states - 1);
    for (Index n = 0; n < length; ++n) {
      if (n > 0) state = pick(mk->transition[state], u());
      out[static_cast<std::size_t>(n)] = mk->emission[state];
    }
  } else {
    const auto& rot = std::get<RotationProcess>(spec.kind);
    const OneSidedSequence seq = make_sequence(rot.rotation);
    out = seq.values(0, length);
  }
  return out;
}

OneSidedSequence as_sequence(std::vector<Complex> values, double K, std::uint64_t seed) {
  const ValueKind kind = detail::classify_values(values);
  const bool real = std::all_of(values.begin(), values.end(),
                                [](const Complex& v) { return v.imag() == 0.0; });
  const auto length = static_cast<Index>(values.size());
  return OneSidedSequence::from_function(
      [values = std::move(values)](Index n) { return values[static_cast<std::size_t>(n)]; }, K,
      kind, real, "stochastic(seed " + std::to_string(seed) + ")", length);
}

}  // namespace

void validate(const ProcessSpec& spec) {
  const double K = spec.bound;
  if (!(K >= 0.0) || !std::isfinite(K)) reject("process bound K must be finite and >= 0");
  if (const auto* iid = std::get_if<IidProcess>(&spec.kind)) {
    if (const auto* d = std::get_if<DiscreteDistribution>(&iid->distribution)) {
      if (d->support.empty()) reject("discrete distribution needs a nonempty support");
      if (d->support.size() != d->probabilities.size()) {
        reject("discrete distribution: support and probabilities differ in length");
      }
      check_probabilities(d->probabilities, "discrete distribution");
      for (const Complex& v : d->support) check_bound(v, K, "discrete distribution");
    } else if (const auto* iv = std::get_if<UniformInterval>(&iid->distribution)) {
      if (!(iv->lo <= iv->hi)) reject("uniform interval needs lo <= hi");
      check_bound(iv->lo, K, "uniform interval");
      check_bound(iv->hi, K, "uniform interval");
    } else {
      const auto& disk = std::get<UniformDisk>(iid->distribution);
      if (!(disk.radius >= 0.0)) reject("uniform disk radius must be >= 0");
      check_bound(disk.radius, K, "uniform disk");
    }
  } else if (const auto* mk = std::get_if<MarkovProcess>(&spec.kind)) {
    const std::size_t n = mk->emission.size();
    if (n == 0) reject("Markov chain needs at least one state");
    if (mk->transition.size() != n) reject("Markov transition matrix must be ", n, " x ", n);
    for (const auto& row : mk->transition) {
      if (row.size() != n) reject("Markov transition matrix must be ", n, " x ", n);
      check_probabilities(row, "Markov transition row");
    }
    for (const Complex& v : mk->emission) check_bound(v, K, "Markov emission");
  } else {
    const auto& rot = std::get<RotationProcess>(spec.kind);
    const OneSidedSequence seq = make_sequence(rot.rotation);
    if (seq.bound() > K * (1 + 1e-12)) {
      reject("rotation-driven process: boundary function exceeds the bound K = ", K);
    }
  }
}

OneSidedSequence sample_process(const ProcessSpec& spec, Index length) {
  validate(spec);
  if (length < 1) reject("sample_process: length must be >= 1");
  return as_sequence(draw(spec, length, spec.seed), spec.bound, spec.seed);
}

OneSidedSequence sample_process(const ProcessSpec& spec, Index length, std::uint64_t stream) {
  validate(spec);
  if (length < 1) reject("sample_process: length must be >= 1");
  const std::uint64_t seed = stream_seed(spec.seed, stream);
  return as_sequence(draw(spec, length, seed), spec.bound, seed);
}

std::optional<double> distribution_variance(const ProcessSpec& spec) {
  const auto* iid = std::get_if<IidProcess>(&spec.kind);
  if (!iid) return std::nullopt;
  if (const auto* d = std::get_if<DiscreteDistribution>(&iid->distribution)) {
    Complex mean{0.0};
    double second = 0.0;
    for (std::size_t i = 0; i < d->support.size(); ++i) {
      mean += d->probabilities[i] * d->support[i];
      second += d->probabilities[i] * std::norm(d->support[i]);
    }
    return std::max(0.0, second - std::norm(mean));
  }
  if (const auto* iv = std::get_if<UniformInterval>(&iid->distribution)) {
    return (iv->hi - iv->lo) * (iv->hi - iv->lo) / 12.0;
  }
  const auto& disk = std::get<UniformDisk>(iid->distribution);
  return disk.radius * disk.radius / 2.0;
}

VarianceEstimate sample_variance(std::span<const Complex> samples) {
  if (samples.size() < 2) reject("sample variance needs at least two samples");
  const auto S = static_cast<double>(samples.size());
  // Shift by the first sample so constant data gives exactly zero.
  const Complex shift = samples.front();
  Complex mean{0.0};
  for (const Complex& x : samples) mean += x - shift;
  mean /= S;
  double m2 = 0.0, m4 = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const Complex& x : samples) {
    const Complex e = x - shift - mean;
    const double d = std::norm(e);
    m2 += d;
    m4 += d * d;
    sxx += e.real() * e.real();
    syy += e.imag() * e.imag();
    sxy += e.real() * e.imag();
  }
  VarianceEstimate out;
  out.variance = m2 / (S - 1);
  m4 /= S;
  sxx /= S - 1;
  syy /= S - 1;
  sxy /= S - 1;
  // Var(s^2) = (mu4 - sigma^4) / S + 2 tr(Sigma^2) / (S (S - 1)), Sigma the
  // covariance of (re, im), with sample moments plugged in.
  const double v = out.variance;
  const double trace_sq = sxx * sxx + syy * syy + 2 * sxy * sxy;
  const double var_of_var = std::max(0.0, m4 - v * v) / S + 2 * trace_sq / (S * (S - 1));
  out.standard_error = std::sqrt(var_of_var);
  return out;
}

std::vector<VarianceEstimate> variance_window(const ProcessSpec& spec, std::span<const Index> indices,
                                              Index samples) {
  validate(spec);
  if (samples < 100) reject("variance_window needs at least 100 samples");
  if (indices.empty()) return {};
  Index last = 0;
  for (Index i : indices) {
    if (i < 0) reject("variance_window: negative index");
    last = std::max(last, i);
  }
  std::vector<std::vector<Complex>> by_index(indices.size(),
                                             std::vector<Complex>(static_cast<std::size_t>(samples)));
  detail::parallel_for(static_cast<std::size_t>(samples), [&](std::size_t s) {
    const auto path = draw(spec, last + 1, stream_seed(spec.seed, s));
    for (std::size_t k = 0; k < indices.size(); ++k) {
      by_index[k][s] = path[static_cast<std::size_t>(indices[k])];
    }
  });
  std::vector<VarianceEstimate> out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    VarianceEstimate e = sample_variance(by_index[k]);
    e.index = indices[k];
    out.push_back(e);
  }
  return out;
}

std::optional<Separation> separated_values(std::span<const Complex> samples, double bound, Index m,
                                           double sigma) {
  if (samples.empty()) reject("separated_values: empty sample set");
  if (m < 1) reject("separated_values: m must be >= 1");
  if (!(sigma >= 0.0)) reject("separated_values: sigma must be >= 0");
  if (!(bound >= 0.0)) reject("separated_values: bound must be >= 0");
  if (sigma == 0.0) return std::nullopt;
  const double threshold = std::sqrt(sigma / 2);
  const Index m_used = std::max<Index>(m, static_cast<Index>(std::ceil(1.0 / threshold)));
  const double s = 1.0 / static_cast<double>(m_used);
  const double reach = bound + s;

  // Hexagonal lattice through the origin, rows by ascending y then x.
  std::vector<Complex> centers;
  const double row_height = s * std::sqrt(3.0) / 2;
  const auto rows = static_cast<Index>(std::floor(reach / row_height));
  for (Index j = -rows; j <= rows; ++j) {
    const double y = static_cast<double>(j) * row_height;
    const double offset = (j % 2 != 0) ? s / 2 : 0.0;
    const auto cols = static_cast<Index>(std::ceil(reach / s)) + 1;
    for (Index i = -cols; i <= cols; ++i) {
      const Complex c{static_cast<double>(i) * s + offset, y};
      if (std::abs(c) <= reach + 1e-12) centers.push_back(c);
    }
  }

  std::vector<std::size_t> counts(centers.size(), 0);
  for (const Complex& x : samples) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double d = std::abs(x - centers[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    ++counts[best];
  }

  // First centres in enumeration order meeting each probability requirement.
  const auto total = static_cast<double>(samples.size());
  const double N = static_cast<double>(centers.size());
  std::size_t z = 0;
  while (static_cast<double>(counts[z]) * N < total) ++z;
  const double min_probability = sigma / (8 * bound * bound * N);

  std::optional<std::size_t> w;
  for (std::size_t k = 0; k < centers.size() && !w; ++k) {
    if (std::abs(centers[k] - centers[z]) < threshold || counts[k] == 0) continue;
    if (static_cast<double>(counts[k]) / total >= min_probability) w = k;
  }
  if (!w) return std::nullopt;
  const double prob_w = static_cast<double>(counts[*w]) / total;

  Separation out;
  out.z = centers[z];
  out.w = centers[*w];
  out.prob_z = static_cast<double>(counts[z]) / total;
  out.prob_w = prob_w;
  out.distance = std::abs(out.z - out.w);
  out.threshold = threshold;
  out.cover_size = centers.size();
  out.m_used = m_used;
  out.min_probability = min_probability;
  return out;
}

MonteCarloReport certificate_rate_experiment(const ProcessSpec& spec, Index trials, Index window,
                                             Index horizon, double eps, double delta) {
  validate(spec);
  if (trials < 1) reject("certificate_rate_experiment: trials must be >= 1");
  if (window < 1) reject("certificate_rate_experiment: W must be >= 1");
  if (horizon < 2 * window + 1) reject("certificate_rate_experiment: horizon too short for W");
  if (!(eps >= 0.0) || !(delta > 0.0)) reject("certificate_rate_experiment: need eps >= 0, delta > 0");
  constexpr Index kSeparationM = 4;

  if (std::holds_alternative<IidProcess>(spec.kind)) {
    const double sigma = *distribution_variance(spec);
    if (sigma == 0.0) {
      reject("precondition delta <= sqrt(sigma/2) fails: the distribution has zero variance");
    }
    const auto reference = draw(spec, 10000, stream_seed(spec.seed, ~std::uint64_t{0}));
    const auto sep = separated_values(reference, spec.bound, kSeparationM, sigma);
    if (!sep) reject("precondition fails: no separated values found for this distribution");
    if (delta > sep->distance + 1e-12) {
      reject("precondition fails: delta = ", delta, " exceeds the separation ", sep->distance);
    }
  }

  MonteCarloReport report;
  report.spec = spec;
  report.trials = trials;
  report.window = window;
  report.horizon = horizon;
  report.eps = eps;
  report.delta = delta;
  report.outcomes.resize(static_cast<std::size_t>(trials));

  detail::parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    TrialOutcome& out = report.outcomes[t];
    out.trial = static_cast<Index>(t);
    out.stream = t;
    const OneSidedSequence path = sample_process(spec, horizon + 1, t);
    for (FlankSide side : {FlankSide::Backward, FlankSide::Forward}) {
      PairSearchResult r = find_pair_certificate(path, window, horizon, eps, delta, side);
      if (r.certificate) {
        out.found = true;
        out.certificate = std::move(r.certificate);
        break;
      }
    }
    const auto values = path.values(0, horizon + 1);
    out.variance = sample_variance(values);
    out.separation = separated_values(values, spec.bound, kSeparationM, out.variance.variance);
  });

  for (const TrialOutcome& o : report.outcomes) report.hits += o.found ? 1 : 0;
  report.hit_rate = static_cast<double>(report.hits) / static_cast<double>(trials);
  return report;
}

}  // namespace nbscope
