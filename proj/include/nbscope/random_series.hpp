// Stochastic coefficient sequences and the certificate-rate Monte Carlo
// experiment for random power series.

#pragma once

#include <nbscope/right_limits.hpp>
#include <nbscope/sequence.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace nbscope {

struct DiscreteDistribution {
  std::vector<Complex> support;
  std::vector<double> probabilities;
};

struct UniformInterval {
  double lo = -1.0;
  double hi = 1.0;
};

struct UniformDisk {
  double radius = 1.0;
};

using IidDistribution = std::variant<DiscreteDistribution, UniformInterval, UniformDisk>;

struct IidProcess {
  IidDistribution distribution;
};

/// Finite-state chain; the initial state is drawn uniformly.
struct MarkovProcess {
  std::vector<std::vector<double>> transition;
  std::vector<Complex> emission;
};

/// Deterministic a_n = g(frac(theta0 + n*q)).
struct RotationProcess {
  RotationSpec rotation;
};

struct ProcessSpec {
  std::variant<IidProcess, MarkovProcess, RotationProcess> kind;
  double bound = 1.0;  // K: every emission satisfies |value| <= K
  std::uint64_t seed = 0;
};

void validate(const ProcessSpec& spec);

/// Deterministic in (spec.seed, length). Returns a finite sequence of the
/// given length whose bound is K.
OneSidedSequence sample_process(const ProcessSpec& spec, Index length);

/// Same as sample_process but on the independent stream derived from
/// (spec.seed, stream).
OneSidedSequence sample_process(const ProcessSpec& spec, Index length, std::uint64_t stream);

/// Exact variance of an iid distribution; nullopt for other kinds.
std::optional<double> distribution_variance(const ProcessSpec& spec);

struct VarianceEstimate {
  Index index = 0;
  double variance = 0.0;
  double standard_error = 0.0;
};

/// Unbiased variance of |a_n - mean|^2 across `samples` independent paths.
std::vector<VarianceEstimate> variance_window(const ProcessSpec& spec, std::span<const Index> indices,
                                              Index samples);

/// Unbiased variance of a single sample set, with a plug-in standard error
/// from Var(s^2) = (mu4 - sigma^4)/S + 2 tr(Sigma^2)/(S(S-1)).
VarianceEstimate sample_variance(std::span<const Complex> samples);

struct Separation {
  Complex z;
  Complex w;
  double prob_z = 0.0;
  double prob_w = 0.0;
  double distance = 0.0;
  double threshold = 0.0;  // sqrt(sigma/2)
  std::size_t cover_size = 0;  // N_m
  Index m_used = 0;
  double min_probability = 0.0;  // the bound required of prob_w
};

/// Disk-cover construction for separated values. Returns nullopt when sigma
/// is zero or no far disk reaches the required probability. z and w are the
/// first lattice centres (rows by ascending y, then x) with probability at
/// least 1/N_m and min_probability respectively.
std::optional<Separation> separated_values(std::span<const Complex> samples, double bound, Index m,
                                           double sigma);

struct TrialOutcome {
  Index trial = 0;
  std::uint64_t stream = 0;
  bool found = false;
  std::optional<NonReflectionlessCertificate> certificate;
  VarianceEstimate variance;
  std::optional<Separation> separation;
};

struct MonteCarloReport {
  ProcessSpec spec;
  Index trials = 0;
  Index window = 0;
  Index horizon = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::vector<TrialOutcome> outcomes;
  Index hits = 0;
  double hit_rate = 0.0;
};

MonteCarloReport certificate_rate_experiment(const ProcessSpec& spec, Index trials, Index window,
                                             Index horizon, double eps, double delta);

}  // namespace nbscope
