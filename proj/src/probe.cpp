// Arc L1 scan: midpoint-rule samples of |f(r e^{i theta})| via FFT.

#include <nbscope/analytic.hpp>

#include "detail.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace nbscope {

using detail::reject;

namespace {

constexpr double kTwoPiHi = 6.283185307179586;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// n * phi reduced to (-pi, pi], keeping the product's rounding error.
double reduced_angle(double n, double phi) {
  const double p = n * phi;
  const double e = std::fma(n, phi, -p);
  const double k = std::nearbyint(p / kTwoPiHi);
  double r = std::fma(-k, kTwoPiHi, p);
  r -= k * kTwoPiLo;
  return r + e;
}

/// exp(i * n * phi) for a non-negative integer n of any size.
Complex unit_phase(Index n, double phi) {
  constexpr Index kSplit = Index{1} << 32;
  double angle = 0.0;
  if (n >= kSplit) {
    angle = reduced_angle(static_cast<double>(n >> 32), std::ldexp(phi, 32)) +
            reduced_angle(static_cast<double>(n & (kSplit - 1)), phi);
  } else {
    angle = reduced_angle(static_cast<double>(n), phi);
  }
  return std::polar(1.0, angle);
}

class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    buf_ = fftw_alloc_complex(n);
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buf_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  Complex* data() { return reinterpret_cast<Complex*>(buf_); }
  std::size_t size() const { return n_; }
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// Coefficients a_n r^n e^{i n phi} for n < terms.
std::vector<Complex> weighted_coefficients(const OneSidedSequence& seq, double r, double phi,
                                           Index first, Index count) {
  std::vector<Complex> out(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) {
    const Index n = first + k;
    const Complex a = seq(n);
    if (a == Complex{0.0}) continue;
    out[static_cast<std::size_t>(k)] =
        a * std::pow(r, static_cast<double>(n)) * unit_phase(n, phi);
  }
  return out;
}

std::vector<double> full_circle_samples(const OneSidedSequence& seq, double r, Index M,
                                        Index terms) {
  // theta_j = (j + 1/2) 2 pi / M; fold n mod M, then one inverse DFT.
  const double phi = std::numbers::pi / static_cast<double>(M);
  Fft fft(static_cast<std::size_t>(M));
  Complex* c = fft.data();
  std::fill(c, c + M, Complex{0.0});
  constexpr Index kChunk = 1 << 20;
  for (Index first = 0; first < terms; first += kChunk) {
    const Index count = std::min(kChunk, terms - first);
    const auto w = weighted_coefficients(seq, r, phi, first, count);
    for (Index k = 0; k < count; ++k) c[(first + k) % M] += w[static_cast<std::size_t>(k)];
  }
  fft.backward();
  std::vector<double> out(static_cast<std::size_t>(M));
  for (Index j = 0; j < M; ++j) out[static_cast<std::size_t>(j)] = std::abs(c[j]);
  return out;
}

std::vector<double> arc_samples(const OneSidedSequence& seq, const ArcSpec& arc, double r, Index M,
                                Index terms) {
  // Bluestein: with h the node spacing, f_j = chi(j) sum_n x_n conj(chi(j - n)),
  // chi(m) = e^{i h m^2 / 2}. Long series are processed in blocks that reuse
  // the kernel transform; block s contributes with the factor e^{i h s j}.
  const double h = arc.width() / static_cast<double>(M);
  const double half_h = h / 2;
  const double phi = arc.alpha + half_h;
  const auto Lmin = std::bit_ceil(static_cast<std::size_t>(2 * M));
  const std::size_t L = std::max<std::size_t>(Lmin, std::size_t{1} << 18);
  const auto B = static_cast<Index>(L) - M + 1;

  auto chirp = [&](Index m) { return unit_phase(m * m, half_h); };

  std::vector<Complex> kernel(L, Complex{0.0});
  for (Index m = 0; m < M; ++m) kernel[static_cast<std::size_t>(m)] = std::conj(chirp(m));
  for (Index m = 1; m < B; ++m) kernel[L - static_cast<std::size_t>(m)] = std::conj(chirp(m));
  Fft fft(L);
  std::copy(kernel.begin(), kernel.end(), fft.data());
  fft.forward();
  std::copy(fft.data(), fft.data() + L, kernel.begin());

  std::vector<Complex> acc(static_cast<std::size_t>(M), Complex{0.0});
  std::vector<Complex> chirp_j(static_cast<std::size_t>(M));
  for (Index j = 0; j < M; ++j) chirp_j[static_cast<std::size_t>(j)] = chirp(j);

  for (Index s = 0; s < terms; s += B) {
    const Index count = std::min(B, terms - s);
    const auto b = weighted_coefficients(seq, r, phi, s, count);
    Complex* x = fft.data();
    std::fill(x, x + L, Complex{0.0});
    for (Index k = 0; k < count; ++k) x[k] = b[static_cast<std::size_t>(k)] * chirp(k);
    fft.forward();
    for (std::size_t i = 0; i < L; ++i) x[i] *= kernel[i];
    fft.backward();
    const double scale = 1.0 / static_cast<double>(L);
    for (Index j = 0; j < M; ++j) {
      Complex v = x[j] * scale * chirp_j[static_cast<std::size_t>(j)];
      if (s > 0) v *= unit_phase(s * j, h);
      acc[static_cast<std::size_t>(j)] += v;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(M));
  for (Index j = 0; j < M; ++j) out[static_cast<std::size_t>(j)] = std::abs(acc[static_cast<std::size_t>(j)]);
  return out;
}

double midpoint_integral(const std::vector<double>& samples, double width) {
  detail::CompensatedSum sum;
  for (double v : samples) sum.add(Complex{v, 0.0});
  return sum.value().real() / static_cast<double>(samples.size()) * width /
         (2 * std::numbers::pi);
}

}  // namespace

std::vector<double> arc_modulus_samples(const OneSidedSequence& seq, const ArcSpec& arc, double r,
                                        Index quad_points, Index terms) {
  if (quad_points < 1) reject("quadrature needs at least one node");
  if (!(r >= 0.0 && r < 1.0)) reject("radius must lie in [0, 1)");
  if (terms < 0) reject("term count must be >= 0");
  if (terms > 0) seq.require_extent(terms - 1, "arc scan");
  if (arc.full) return full_circle_samples(seq, r, quad_points, terms);
  return arc_samples(seq, arc, r, quad_points, terms);
}

BoundaryProbeReport boundary_l1_scan(const OneSidedSequence& seq, const ArcSpec& arc,
                                     const std::vector<double>& radii, Index quad_points,
                                     double tol) {
  if (quad_points < 64) reject("boundary probe needs at least 64 quadrature points");
  if (!(tol > 0.0)) reject("boundary probe tol must be > 0");
  if (radii.empty()) reject("boundary probe needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] <= 1.0 - 1e-6)) {
      reject("radius ", radii[i], " is outside (0, 1 - 1e-6]");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) reject("radii must be strictly ascending");
  }

  BoundaryProbeReport report;
  report.arc = arc;
  report.quad_points = quad_points;
  report.tol = tol;
  report.radii.resize(radii.size());
  const double A = seq.bound();
  const double width = arc.width();
  constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

  detail::parallel_for(radii.size(), [&](std::size_t i) {
    RadiusIntegral& out = report.radii[i];
    const double r = radii[i];
    out.r = r;
    const Index N = truncation_length(A, r, tol);
    out.terms = N;
    if (N > kMaxTerms) {
      out.skipped = true;
      out.skip_reason = "needs " + std::to_string(N) + " terms, above the cap";
      return;
    }
    if (auto ext = seq.extent(); ext && N > *ext) {
      out.skipped = true;
      out.skip_reason = "needs " + std::to_string(N) + " terms, sequence has " +
                        std::to_string(*ext);
      return;
    }
    const double coarse = midpoint_integral(arc_modulus_samples(seq, arc, r, quad_points, N), width);
    const double fine =
        midpoint_integral(arc_modulus_samples(seq, arc, r, 2 * quad_points, N), width);
    out.integral = fine;
    out.quad_err = std::abs(fine - coarse);
    // Tail per node plus a rounding allowance for the transforms.
    const double log_len = std::log2(static_cast<double>(std::max<Index>(N, 2 * quad_points)) + 2);
    out.trunc_err = (tol + 64 * kUnit * log_len * A / (1.0 - r)) * width / (2 * std::numbers::pi);
  });
  report.growth_fit = fit_growth(report.radii);
  return report;
}

std::optional<GrowthFit> fit_growth(const std::vector<RadiusIntegral>& radii) {
  std::vector<double> xs, ys;
  for (const RadiusIntegral& ri : radii) {
    if (ri.skipped) continue;
    xs.push_back(std::log(1.0 / (1.0 - ri.r)));
    ys.push_back(ri.integral);
  }
  if (xs.size() < 2) return std::nullopt;
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  GrowthFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double res = 0, norm = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    res += e * e;
    norm += ys[i] * ys[i];
  }
  fit.rel_residual = norm > 0 ? std::sqrt(res / norm) : 0.0;
  fit.points = xs.size();
  return fit;
}

}  // namespace nbscope
