#include <nbscope/nbscope.h>
#include <nbscope/report.hpp>

#include <cmath>
#include <fstream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

struct nbs_sequence {
  nbscope::OneSidedSequence seq;
};

struct nbs_report {
  std::string json;
  std::string csv;
  bool has_csv = false;
  bool found = false;
};

namespace {

thread_local std::string last_error;

nbs_status fail(nbs_status status, const char* what) {
  last_error = what;
  return status;
}

template <class F>
nbs_status guarded(F&& body) {
  try {
    return body();
  } catch (const nbscope::NumericCapError& e) {
    return fail(NBS_NUMERIC_CAP, e.what());
  } catch (const std::logic_error& e) {  // invalid_argument, out_of_range, domain_error
    return fail(NBS_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NBS_INTERNAL, "out of memory");
  } catch (const std::runtime_error& e) {
    return fail(NBS_IO, e.what());
  } catch (const std::exception& e) {
    return fail(NBS_INTERNAL, e.what());
  } catch (...) {
    return fail(NBS_INTERNAL, "unknown error");
  }
}

nbs_status emit(nbs_report** out, std::string json, bool found) {
  auto* r = new nbs_report;
  r->json = std::move(json);
  r->found = found;
  *out = r;
  return NBS_OK;
}

#define NBS_REQUIRE(cond, msg) \
  do {                         \
    if (!(cond)) return fail(NBS_INVALID, msg); \
  } while (0)

std::vector<nbscope::Complex> gather(const double* re, const double* im, std::size_t count) {
  std::vector<nbscope::Complex> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = {re[i], im ? im[i] : 0.0};
  return v;
}

nbscope::ArcSpec make_arc(int full, double alpha, double beta) {
  return full ? nbscope::ArcSpec::full_circle() : nbscope::ArcSpec::open(alpha, beta);
}

}  // namespace

extern "C" {

const char* nbs_version(void) { return "0.1.0"; }

const char* nbs_last_error(void) { return last_error.c_str(); }

const char* nbs_status_name(nbs_status status) {
  switch (status) {
    case NBS_OK: return "ok";
    case NBS_NOT_FOUND: return "not found";
    case NBS_INVALID: return "invalid argument";
    case NBS_NUMERIC_CAP: return "numeric cap exceeded";
    case NBS_IO: return "i/o error";
    case NBS_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void nbs_search_params_init(nbs_search_params* p) {
  if (!p) return;
  p->window = 5;
  p->horizon = 100000;
  p->eps = -1.0;
  p->delta = 0.5;
  p->min_recurrence = 3;
  p->flank = NBS_FLANK_BOTH;
  p->has_decay = 0;
  p->decay_C = 1.0;
  p->decay_D = 1.0;
}

void nbs_verdict_params_init(nbs_verdict_params* p) {
  if (!p) return;
  const nbscope::VerdictConfig c;
  p->window = c.window;
  p->horizon = c.horizon;
  p->eps = -1.0;
  p->delta = c.delta;
  p->min_recurrence = c.min_recurrence;
  p->p_max = c.p_max;
  p->max_period = c.max_period;
  p->max_preperiod = c.max_preperiod;
}

nbs_status nbs_sequence_from_spec(const char* spec_json, nbs_sequence** out) {
  NBS_REQUIRE(spec_json && out, "null argument");
  return guarded([&] {
    auto seq = nbscope::make_sequence(nbscope::parse_generator_spec(spec_json));
    *out = new nbs_sequence{std::move(seq)};
    return NBS_OK;
  });
}

nbs_status nbs_sequence_load_csv(const char* path, nbs_sequence** out) {
  NBS_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new nbs_sequence{nbscope::load_csv(path)};
    return NBS_OK;
  });
}

nbs_status nbs_sequence_from_values(const double* re, const double* im, size_t count,
                                    nbs_sequence** out) {
  NBS_REQUIRE(re && out, "null argument");
  return guarded([&] {
    auto seq = nbscope::make_sequence(nbscope::ExplicitSpec{gather(re, im, count)});
    *out = new nbs_sequence{std::move(seq)};
    return NBS_OK;
  });
}

void nbs_sequence_free(nbs_sequence* seq) { delete seq; }

nbs_status nbs_sequence_eval(const nbs_sequence* seq, int64_t n, double* re, double* im) {
  NBS_REQUIRE(seq && re && im, "null argument");
  return guarded([&] {
    const nbscope::Complex v = seq->seq(n);
    *re = v.real();
    *im = v.imag();
    return NBS_OK;
  });
}

double nbs_sequence_bound(const nbs_sequence* seq) { return seq ? seq->seq.bound() : NAN; }

int nbs_sequence_is_exact(const nbs_sequence* seq) { return seq && seq->seq.is_exact() ? 1 : 0; }

int64_t nbs_sequence_extent(const nbs_sequence* seq) {
  if (!seq) return -1;
  return seq->seq.extent().value_or(-1);
}

nbs_status nbs_sequence_save_csv(const nbs_sequence* seq, int64_t count, const char* path) {
  NBS_REQUIRE(seq && path, "null argument");
  return guarded([&] {
    std::ostringstream os;
    nbscope::write_csv(os, seq->seq, count);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error(std::string("cannot open ") + path + " for writing");
    f << os.str();
    if (!f) throw std::runtime_error(std::string("write failed: ") + path);
    return NBS_OK;
  });
}

nbs_status nbs_sequence_csv(const nbs_sequence* seq, int64_t count, nbs_report** out) {
  NBS_REQUIRE(seq && out, "null argument");
  return guarded([&] {
    std::ostringstream os;
    nbscope::write_csv(os, seq->seq, count);
    auto* r = new nbs_report;
    r->csv = os.str();
    r->has_csv = true;
    r->found = true;
    *out = r;
    return NBS_OK;
  });
}

nbs_status nbs_eval_f(const nbs_sequence* seq, double z_re, double z_im, double tol,
                      nbs_report** out) {
  NBS_REQUIRE(seq && out, "null argument");
  return guarded([&] {
    const nbscope::Complex z{z_re, z_im};
    const auto r = nbscope::eval_f(seq->seq, z, tol);
    return emit(out, nbscope::report_json(r, z), true);
  });
}

nbs_status nbs_right_limits(const nbs_sequence* seq, int64_t window, int64_t horizon, double eps,
                            size_t max_candidates, int64_t min_recurrence, nbs_report** out) {
  NBS_REQUIRE(seq && out, "null argument");
  return guarded([&] {
    const auto r = nbscope::extract_right_limits(seq->seq, window, horizon, eps, max_candidates,
                                                 min_recurrence);
    return emit(out, nbscope::report_json(r, seq->seq, horizon), !r.candidates.empty());
  });
}

nbs_status nbs_certificate(const nbs_sequence* seq, const nbs_search_params* p,
                           nbs_certificate_mode mode, nbs_report** out) {
  NBS_REQUIRE(seq && p && out, "null argument");
  NBS_REQUIRE(mode >= NBS_CERT_GAP && mode <= NBS_CERT_ANY, "unknown certificate mode");
  return guarded([&] {
    const double eps = p->eps >= 0 ? p->eps : (seq->seq.is_exact() ? 0.0 : 0.05);
    std::optional<nbscope::NonReflectionlessCertificate> cert;
    bool overflow = false;
    if (mode & NBS_CERT_GAP) {
      std::optional<nbscope::Decay> decay;
      if (p->has_decay) decay = nbscope::Decay{p->decay_C, p->decay_D};
      cert = nbscope::find_gap_certificate(seq->seq, p->window, p->horizon, eps, p->delta, decay,
                                           p->min_recurrence);
    }
    if (!cert && (mode & NBS_CERT_PAIR)) {
      std::vector<nbscope::FlankSide> sides;
      if (p->flank != NBS_FLANK_FORWARD) sides.push_back(nbscope::FlankSide::Backward);
      if (p->flank != NBS_FLANK_BACKWARD) sides.push_back(nbscope::FlankSide::Forward);
      for (auto side : sides) {
        auto r = nbscope::find_pair_certificate(seq->seq, p->window, p->horizon, eps, p->delta,
                                                side, p->min_recurrence);
        overflow = overflow || r.overflow;
        if (r.certificate) {
          cert = std::move(r.certificate);
          break;
        }
      }
    }
    const bool found = cert.has_value();
    return emit(out, nbscope::report_json(cert, seq->seq, p->horizon, overflow), found);
  });
}

nbs_status nbs_szego(const nbs_sequence* seq, int64_t p_max, int64_t horizon, nbs_report** out) {
  NBS_REQUIRE(seq && out, "null argument");
  return guarded([&] {
    const auto r = nbscope::szego_block_analysis(seq->seq, p_max, horizon);
    return emit(out, nbscope::report_json(r, seq->seq),
                r.overall != nbscope::SzegoOverall::HorizonExhausted);
  });
}

nbs_status nbs_periodicity(const nbs_sequence* seq, int64_t max_period, int64_t max_preperiod,
                           int64_t horizon, double tol, nbs_report** out) {
  NBS_REQUIRE(seq && out, "null argument");
  return guarded([&] {
    const auto p = nbscope::detect_eventual_periodicity(seq->seq, max_period, max_preperiod,
                                                        horizon, tol);
    return emit(out, nbscope::report_json(p, seq->seq, horizon, tol), p.has_value());
  });
}

nbs_status nbs_verdict(const nbs_sequence* seq, const nbs_verdict_params* p, nbs_report** out) {
  NBS_REQUIRE(seq && p && out, "null argument");
  return guarded([&] {
    nbscope::VerdictConfig c;
    c.window = p->window;
    c.horizon = p->horizon;
    if (p->eps >= 0) c.eps = p->eps;
    c.delta = p->delta;
    c.min_recurrence = p->min_recurrence;
    c.p_max = p->p_max;
    c.max_period = p->max_period;
    c.max_preperiod = p->max_preperiod;
    const auto v = nbscope::verdict(seq->seq, c);
    return emit(out, nbscope::report_json(v, seq->seq, c),
                !std::holds_alternative<nbscope::Inconclusive>(v));
  });
}

nbs_status nbs_probe(const nbs_sequence* seq, int full, double alpha, double beta,
                     const double* radii, size_t radius_count, int64_t quad_points, double tol,
                     nbs_report** out) {
  NBS_REQUIRE(seq && out && (radii || radius_count == 0), "null argument");
  return guarded([&] {
    const auto arc = make_arc(full, alpha, beta);
    const std::vector<double> rs(radii, radii + radius_count);
    const auto r = nbscope::boundary_l1_scan(seq->seq, arc, rs, quad_points, tol);
    auto* rep = new nbs_report;
    rep->json = nbscope::report_json(r, seq->seq);
    rep->csv = nbscope::probe_csv(r);
    rep->has_csv = true;
    rep->found = true;
    *out = rep;
    return NBS_OK;
  });
}

nbs_status nbs_reflectionless_periodic(const double* re, const double* im, size_t period, int full,
                                       double alpha, double beta, nbs_report** out) {
  NBS_REQUIRE(re && out, "null argument");
  return guarded([&] {
    const auto arc = make_arc(full, alpha, beta);
    const auto r = nbscope::periodic_reflectionless_check(gather(re, im, period), arc);
    return emit(out, nbscope::report_json(r, arc), true);
  });
}

nbs_status nbs_decay_rule(const double* re, const double* im, int64_t window, int side, double C,
                          double D, double delta, nbs_report** out) {
  NBS_REQUIRE(re && out, "null argument");
  NBS_REQUIRE(window >= 0, "window radius must be >= 0");
  NBS_REQUIRE(side == 0 || side == 1, "side must be 0 (positive) or 1 (negative)");
  return guarded([&] {
    nbscope::TwoSidedWindow w;
    w.radius = window;
    w.values = gather(re, im, static_cast<std::size_t>(2 * window + 1));
    w.provenance = nbscope::Index{0};
    const auto s = side == 0 ? nbscope::DecaySide::Positive : nbscope::DecaySide::Negative;
    const auto r = nbscope::decay_rule_check(w, s, C, D, delta);
    return emit(out, nbscope::report_json(r, s, C, D, delta), true);
  });
}

nbs_status nbs_montecarlo(const char* process_json, int64_t trials, int64_t window, int64_t horizon,
                          double eps, double delta, nbs_report** out) {
  NBS_REQUIRE(process_json && out, "null argument");
  return guarded([&] {
    const auto spec = nbscope::parse_process_spec(process_json);
    const auto r = nbscope::certificate_rate_experiment(spec, trials, window, horizon, eps, delta);
    return emit(out, nbscope::report_json(r), r.hits > 0);
  });
}

const char* nbs_report_json(const nbs_report* report) {
  return report ? report->json.c_str() : nullptr;
}

const char* nbs_report_csv(const nbs_report* report) {
  return report && report->has_csv ? report->csv.c_str() : nullptr;
}

int nbs_report_found(const nbs_report* report) { return report && report->found ? 1 : 0; }

void nbs_report_free(nbs_report* report) { delete report; }

}  // extern "C"
