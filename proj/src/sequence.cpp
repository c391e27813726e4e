#include <nbscope/sequence.hpp>

#include "detail.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>

namespace nbscope {

const char* to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::ExactInteger: return "exact-integer";
    case ValueKind::ExactRational: return "exact-rational";
    case ValueKind::Float: return "float";
  }
  return "float";
}

namespace detail {

ValueKind classify_values(std::span<const Complex> values) {
  bool integer = true;
  bool dyadic = true;
  for (const Complex& v : values) {
    if (v.imag() != 0.0 || !std::isfinite(v.real())) return ValueKind::Float;
    if (v.real() != std::nearbyint(v.real())) integer = false;
    const double scaled = std::ldexp(v.real(), 20);
    if (scaled != std::nearbyint(scaled)) dyadic = false;
  }
  if (integer) return ValueKind::ExactInteger;
  return dyadic ? ValueKind::ExactRational : ValueKind::Float;
}

unsigned worker_count() {
  if (const char* env = std::getenv("NBSCOPE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// ---------------------------------------------------------------------------

OneSidedSequence OneSidedSequence::from_function(Eval eval, double bound, ValueKind kind,
                                                 bool real_valued, std::string label,
                                                 std::optional<Index> extent) {
  if (!eval) detail::reject("sequence evaluator is empty");
  if (!(bound >= 0.0) || !std::isfinite(bound)) detail::reject("sequence bound must be finite and >= 0");
  if (extent && *extent < 0) detail::reject("sequence extent must be >= 0");
  return OneSidedSequence(std::make_shared<const Impl>(
      Impl{std::move(eval), bound, kind, real_valued, extent, std::move(label)}));
}

Complex OneSidedSequence::operator()(Index n) const {
  if (n < 0) throw std::out_of_range("negative sequence index " + std::to_string(n));
  if (impl_->extent && n >= *impl_->extent) {
    throw std::out_of_range("index " + std::to_string(n) + " beyond sequence extent " +
                            std::to_string(*impl_->extent));
  }
  const Complex v = impl_->eval(n);
  if (!(std::abs(v) <= impl_->bound * (1.0 + 1e-12))) {
    throw std::logic_error("sequence '" + impl_->label + "' violates its bound at index " +
                           std::to_string(n));
  }
  return v;
}

std::vector<Complex> OneSidedSequence::values(Index begin, Index end) const {
  std::vector<Complex> out;
  if (end <= begin) return out;
  out.reserve(static_cast<std::size_t>(end - begin));
  for (Index n = begin; n < end; ++n) out.push_back((*this)(n));
  return out;
}

void OneSidedSequence::require_extent(Index last, const char* what) const {
  if (impl_->extent && last >= *impl_->extent) {
    detail::reject(what, " needs index ", last, " but the sequence only has ", *impl_->extent,
                   " terms");
  }
}

// ---------------------------------------------------------------------------

TwoSidedWindow window(const OneSidedSequence& seq, Index center, Index radius) {
  if (radius < 1) detail::reject("window radius must be >= 1");
  if (center < radius) detail::reject("window centre ", center, " is smaller than radius ", radius);
  seq.require_extent(center + radius, "window");
  TwoSidedWindow w;
  w.radius = radius;
  w.values = seq.values(center - radius, center + radius + 1);
  w.provenance = center;
  w.eps = 0.0;
  return w;
}

// ---------------------------------------------------------------------------

SnapResult snap_to_limit_points(const OneSidedSequence& seq, std::span<const Complex> targets,
                                double onset_tol, Index horizon) {
  if (targets.empty()) detail::reject("snap: target set is empty");
  if (!(onset_tol >= 0.0)) detail::reject("snap: onset_tol must be >= 0");
  if (horizon < 0) detail::reject("snap: horizon must be >= 0");
  double min_dist = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(targets[i]));
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      min_dist = std::min(min_dist, std::abs(targets[i] - targets[j]));
    }
  }
  if (targets.size() > 1 && !(min_dist > 2.0 * onset_tol)) {
    detail::reject("snap: target points must be separated by more than 2*onset_tol");
  }
  seq.require_extent(horizon, "snap");

  std::vector<Complex> points(targets.begin(), targets.end());
  auto nearest = [points](Complex a) {
    std::size_t best = 0;
    double best_d = std::abs(a - points[0]);
    for (std::size_t i = 1; i < points.size(); ++i) {
      const double d = std::abs(a - points[i]);
      if (d < best_d) {
        best = i;
        best_d = d;
      }
    }
    return best;
  };

  SnapReport report;
  report.horizon = horizon;
  report.gamma = targets.size() > 1 ? 0.5 * min_dist : std::numeric_limits<double>::infinity();
  Index last_bad = -1;
  for (Index n = 0; n <= horizon; ++n) {
    const Complex a = seq(n);
    const std::size_t k = nearest(a);
    const double d = std::abs(a - points[k]);
    if (d > report.gamma) last_bad = n;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i != k && std::abs(std::abs(a - points[i]) - d) <= onset_tol) {
        report.ties.push_back(n);
        break;
      }
    }
  }
  report.onset = last_bad + 1;

  const ValueKind kind = detail::classify_values(points);
  bool real = std::all_of(points.begin(), points.end(), [](Complex v) { return v.imag() == 0.0; });
  auto eval = [seq, points, nearest](Index n) { return points[nearest(seq(n))]; };
  SnapResult result{OneSidedSequence::from_function(eval, max_abs, kind, real,
                                                    "snapped(" + seq.label() + ")", seq.extent()),
                    std::move(report)};
  return result;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, const OneSidedSequence& seq, Index count) {
  if (count < 0) detail::reject("csv: count must be >= 0");
  seq.require_extent(count - 1, "csv export");
  out << "n,re,im\n";
  char line[128];
  for (Index n = 0; n < count; ++n) {
    const Complex v = seq(n);
    std::snprintf(line, sizeof line, "%" PRId64 ",%.17g,%.17g\n", n, v.real() + 0.0,
                  v.imag() + 0.0);
    out << line;
  }
}

OneSidedSequence read_csv(std::istream& in, const std::string& label) {
  std::string line;
  if (!std::getline(in, line)) detail::reject("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,re,im") detail::reject("csv: expected header 'n,re,im', got '", line, "'");
  std::vector<Complex> values;
  Index expected = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    const long long n = std::strtoll(p, &end, 10);
    if (end == p || *end != ',') detail::reject("csv: malformed row '", line, "'");
    if (n != expected) detail::reject("csv: expected index ", expected, ", got ", n);
    p = end + 1;
    const double re = std::strtod(p, &end);
    if (end == p || *end != ',') detail::reject("csv: malformed row '", line, "'");
    p = end + 1;
    const double im = std::strtod(p, &end);
    if (end == p || *end != '\0') detail::reject("csv: malformed row '", line, "'");
    if (!std::isfinite(re) || !std::isfinite(im)) detail::reject("csv: non-finite value at ", n);
    values.emplace_back(re, im);
    ++expected;
  }
  if (values.empty()) detail::reject("csv: no rows");
  ExplicitSpec spec{std::move(values)};
  OneSidedSequence base = make_sequence(spec);
  auto eval = [base](Index n) { return base(n); };
  return OneSidedSequence::from_function(eval, base.bound(), base.value_kind(), base.is_real(),
                                         label, base.extent());
}

OneSidedSequence load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(in, path);
}

}  // namespace nbscope
