// nbscope command-line front end. Talks to the library only through the C
// interface in nbscope/nbscope.h.

#include <nbscope/nbscope.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kNoFinding = 1, kUsage = 2, kNumericCap = 3 };

struct SequenceSource {
  std::string family;
  std::string input;
  std::string spec_file;
  std::string pattern;
  std::string values;
  std::string exponents;
  std::string fill = "1";
  std::string q = "sqrt2-1";
  double theta = 0.0;
  std::string fn = "fractional-part";
  double constant = 0.0;
};

struct Output {
  std::string path;
  std::string format = "json";
};

struct SeqDeleter {
  void operator()(nbs_sequence* s) const { nbs_sequence_free(s); }
};
struct ReportDeleter {
  void operator()(nbs_report* r) const { nbs_report_free(r); }
};
using SeqPtr = std::unique_ptr<nbs_sequence, SeqDeleter>;
using ReportPtr = std::unique_ptr<nbs_report, ReportDeleter>;

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

int exit_for(nbs_status s) {
  switch (s) {
    case NBS_OK: return kOk;
    case NBS_NOT_FOUND: return kNoFinding;
    case NBS_NUMERIC_CAP: return kNumericCap;
    default: return kUsage;
  }
}

void check(nbs_status s) {
  if (s != NBS_OK) throw Failure(exit_for(s), nbs_last_error());
}

/// "1,0,-1" or "1:0.5,0" (re:im) into a JSON array.
nlohmann::json parse_list(const std::string& text, const char* what) {
  nlohmann::json out = nlohmann::json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw Failure(kUsage, std::string("empty entry in ") + what);
    try {
      const auto colon = item.find(':');
      std::size_t used = 0;
      if (colon == std::string::npos) {
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
      } else {
        const std::string a = item.substr(0, colon), b = item.substr(colon + 1);
        std::size_t ua = 0, ub = 0;
        const double re = std::stod(a, &ua), im = std::stod(b, &ub);
        if (ua != a.size() || ub != b.size()) throw std::invalid_argument(item);
        out.push_back({re, im});
      }
    } catch (const std::logic_error&) {
      throw Failure(kUsage, std::string("cannot parse '") + item + "' in " + what);
    }
  }
  if (out.empty()) throw Failure(kUsage, std::string(what) + " is empty");
  return out;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& v : parse_list(text, what)) {
    if (!v.is_number()) throw Failure(kUsage, std::string(what) + " must be real");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure(kUsage, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string family_spec(const SequenceSource& s) {
  using nlohmann::json;
  json j;
  const std::string& f = s.family;
  if (f == "periodic") {
    if (s.pattern.empty()) throw Failure(kUsage, "--pattern is required for periodic");
    j = {{"family", "periodic"}, {"pattern", parse_list(s.pattern, "--pattern")}};
  } else if (f == "gap-factorial" || f == "gap-squares" || f == "gap-powers2" ||
             f == "gap-explicit") {
    const char* set = f == "gap-factorial" ? "factorials"
                      : f == "gap-squares" ? "squares"
                      : f == "gap-powers2" ? "powers-of-two"
                                           : "explicit";
    j = {{"family", "gap-powers"}, {"set", set}, {"fill", parse_list(s.fill, "--fill")[0]}};
    if (f == "gap-explicit") {
      if (s.exponents.empty()) throw Failure(kUsage, "--exponents is required for gap-explicit");
      json e = json::array();
      for (double x : parse_reals(s.exponents, "--exponents")) e.push_back(static_cast<long long>(x));
      j["exponents"] = e;
    }
  } else if (f == "rudin-shapiro") {
    j = {{"family", "rudin-shapiro"}};
  } else if (f == "rotation") {
    j = {{"family", "rotation"}, {"fn", s.fn}, {"q", s.q}, {"theta", s.theta},
         {"constant", s.constant}};
  } else if (f == "erdos-hard" || f == "erdos-soft") {
    j = {{"family", "erdos"}, {"edge", f == "erdos-hard" ? "hard" : "soft"}};
  } else if (f == "explicit") {
    if (s.values.empty()) throw Failure(kUsage, "--values is required for explicit");
    j = {{"family", "explicit"}, {"values", parse_list(s.values, "--values")}};
  } else {
    throw Failure(kUsage, "unknown family '" + f + "'");
  }
  return j.dump();
}

SeqPtr load_sequence(const SequenceSource& s) {
  const int sources = !s.family.empty() + !s.input.empty() + !s.spec_file.empty();
  if (sources != 1) throw Failure(kUsage, "give exactly one of --family, --input, --spec");
  nbs_sequence* raw = nullptr;
  if (!s.input.empty()) {
    check(nbs_sequence_load_csv(s.input.c_str(), &raw));
  } else if (!s.spec_file.empty()) {
    check(nbs_sequence_from_spec(read_file(s.spec_file).c_str(), &raw));
  } else {
    check(nbs_sequence_from_spec(family_spec(s).c_str(), &raw));
  }
  return SeqPtr(raw);
}

void write_output(const Output& out, const std::string& text) {
  if (out.path.empty() || out.path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) throw Failure(kUsage, "cannot open " + out.path + " for writing");
  f << text;
  if (!f) throw Failure(kUsage, "write failed: " + out.path);
}

int finish(const Output& out, nbs_report* raw, bool allow_csv = false) {
  ReportPtr report(raw);
  const char* csv = nbs_report_csv(report.get());
  if (out.format == "csv") {
    if (!allow_csv || !csv) throw Failure(kUsage, "csv output is not available for this command");
    write_output(out, csv);
  } else {
    write_output(out, nbs_report_json(report.get()));
  }
  return nbs_report_found(report.get()) ? kOk : kNoFinding;
}

void add_source(CLI::App* app, SequenceSource& s) {
  app->add_option("--family", s.family,
                  "periodic, gap-factorial, gap-squares, gap-powers2, gap-explicit, "
                  "rudin-shapiro, rotation, erdos-hard, erdos-soft, explicit");
  app->add_option("--input", s.input, "sequence CSV (n,re,im)");
  app->add_option("--spec", s.spec_file, "generator spec JSON file");
  app->add_option("--pattern", s.pattern, "periodic pattern, e.g. 1,0,-1 (re:im for complex)");
  app->add_option("--values", s.values, "explicit values");
  app->add_option("--exponents", s.exponents, "gap-explicit exponents");
  app->add_option("--fill", s.fill, "gap-powers fill value");
  app->add_option("--q", s.q, "rotation number (decimal, sqrt2, sqrt2-1, golden, golden-1)");
  app->add_option("--theta", s.theta, "rotation phase in turns");
  app->add_option("--fn", s.fn, "rotation boundary function")
      ->check(CLI::IsMember({"fractional-part", "half-step", "constant"}));
  app->add_option("--constant", s.constant, "value for --fn constant");
}

void add_output(CLI::App* app, Output& o, bool csv) {
  app->add_option("--out", o.path, "output file (default stdout)");
  if (csv) {
    app->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }
}

CLI::Option* positive(CLI::Option* o) { return o->check(CLI::PositiveNumber); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Natural-boundary analysis of power series with bounded coefficients"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nbs_version()));

  SequenceSource src;
  Output out;

  // generate
  auto* gen = app.add_subcommand("generate", "write a sequence prefix as CSV");
  std::int64_t count = 0;
  add_source(gen, src);
  positive(gen->add_option("--count", count, "number of values")->required());
  gen->add_option("--out", out.path, "output file (default stdout)");

  // rightlimits
  auto* rl = app.add_subcommand("rightlimits", "recurring windows (right-limit candidates)");
  std::int64_t window = 5, horizon = 100000, min_rec = 3;
  double eps = -1.0, delta = 0.5;
  std::size_t max_candidates = 10;
  add_source(rl, src);
  add_output(rl, out, false);
  positive(rl->add_option("--window", window, "half-width W"));
  positive(rl->add_option("--horizon", horizon, "last index examined"));
  rl->add_option("--eps", eps, "sup-metric cluster radius (default 0 exact, 0.05 float)");
  rl->add_option("--max-candidates", max_candidates, "candidates to report");
  positive(rl->add_option("--min-recurrence", min_rec, "minimum cluster population"));

  // certificate
  auto* cert = app.add_subcommand("certificate", "gap and pair non-reflectionless certificates");
  std::string mode = "any", flank = "both";
  std::optional<double> decay_C, decay_D;
  add_source(cert, src);
  add_output(cert, out, false);
  positive(cert->add_option("--window", window, "flank width W"));
  positive(cert->add_option("--horizon", horizon, "last index examined"));
  cert->add_option("--eps", eps, "flank tolerance (default 0 exact, 0.05 float)");
  cert->add_option("--delta", delta, "centre separation");
  positive(cert->add_option("--min-recurrence", min_rec, "witnesses required"));
  cert->add_option("--mode", mode, "gap, pair or any")->check(CLI::IsMember({"gap", "pair", "any"}));
  cert->add_option("--flank", flank, "pair flank side")
      ->check(CLI::IsMember({"backward", "forward", "both"}));
  cert->add_option("--decay-C", decay_C, "gap flank decay constant C");
  cert->add_option("--decay-D", decay_D, "gap flank decay rate D");

  // szego
  auto* sz = app.add_subcommand("szego", "Szego block analysis of a finite-valued sequence");
  std::int64_t p_max = 8;
  add_source(sz, src);
  add_output(sz, out, false);
  positive(sz->add_option("--p-max", p_max, "largest block length"));
  positive(sz->add_option("--horizon", horizon, "number of coefficients examined"));

  // periodicity
  auto* per = app.add_subcommand("periodicity", "eventual periodicity detection");
  std::int64_t max_period = 64, max_preperiod = 64;
  double tol = 0.0;
  add_source(per, src);
  add_output(per, out, false);
  positive(per->add_option("--max-period", max_period, "largest period"));
  per->add_option("--max-preperiod", max_preperiod, "largest preperiod")->check(CLI::NonNegativeNumber);
  positive(per->add_option("--horizon", horizon, "last index examined"));
  per->add_option("--tol", tol, "comparison tolerance")->check(CLI::NonNegativeNumber);

  // probe
  auto* probe = app.add_subcommand("probe", "arc L1 integrals of |f(r e^{i theta})|");
  std::string arc = "full", radii_text = "0.9,0.99,0.999";
  std::int64_t quad_points = 4096;
  double probe_tol = 1e-10;
  add_source(probe, src);
  add_output(probe, out, true);
  probe->add_option("--arc", arc, "full, or alpha,beta in radians");
  probe->add_option("--radii", radii_text, "ascending radii in (0, 1)");
  probe->add_option("--quad-points", quad_points, "midpoint nodes M (>= 64)");
  probe->add_option("--tol", probe_tol, "per-node truncation tolerance");

  // reflectionless
  auto* refl = app.add_subcommand("reflectionless", "periodic check or decay rule");
  std::string refl_pattern, refl_values, side = "positive";
  double C = 1.0, D = 1.0, refl_delta = 0.5;
  add_output(refl, out, false);
  refl->add_option("--pattern", refl_pattern, "one period b_0..b_{p-1} (periodic check)");
  refl->add_option("--arc", arc, "full, or alpha,beta in radians");
  refl->add_option("--values", refl_values, "b_{-W}..b_{W} (decay rule)");
  refl->add_option("--side", side, "decaying side")->check(CLI::IsMember({"positive", "negative"}));
  refl->add_option("--C", C, "decay constant");
  refl->add_option("--D", D, "decay rate");
  refl->add_option("--delta", refl_delta, "witness threshold");

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "certificate rate for random coefficients");
  std::string process_file, process_json;
  std::int64_t trials = 20;
  std::optional<std::uint64_t> seed;
  double mc_eps = 0.0, mc_delta = 1.0;
  std::int64_t mc_window = 3, mc_horizon = 10000;
  add_output(mc, out, false);
  mc->add_option("--process", process_file, "process spec JSON file");
  mc->add_option("--process-json", process_json, "process spec as inline JSON");
  mc->add_option("--seed", seed, "override the spec seed");
  positive(mc->add_option("--trials", trials, "independent trials"));
  positive(mc->add_option("--window", mc_window, "flank width W"));
  positive(mc->add_option("--horizon", mc_horizon, "path length - 1"));
  mc->add_option("--eps", mc_eps, "flank tolerance");
  mc->add_option("--delta", mc_delta, "centre separation");

  // verdict
  auto* ver = app.add_subcommand("verdict", "run the full pipeline");
  std::int64_t max_period_v = 64, max_preperiod_v = 64;
  add_source(ver, src);
  add_output(ver, out, false);
  positive(ver->add_option("--window", window, "flank width W"));
  positive(ver->add_option("--horizon", horizon, "last index examined"));
  ver->add_option("--eps", eps, "flank tolerance (default 0 exact, 0.05 float)");
  ver->add_option("--delta", delta, "centre separation");
  positive(ver->add_option("--min-recurrence", min_rec, "witnesses required"));
  positive(ver->add_option("--p-max", p_max, "Szego block limit"));
  positive(ver->add_option("--max-period", max_period_v, "periodicity search limit"));
  ver->add_option("--max-preperiod", max_preperiod_v, "periodicity search limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    nbs_report* report = nullptr;
    if (gen->parsed()) {
      SeqPtr seq = load_sequence(src);
      check(nbs_sequence_csv(seq.get(), count, &report));
      ReportPtr r(report);
      write_output(out, nbs_report_csv(r.get()));
      return kOk;
    }
    if (rl->parsed()) {
      SeqPtr seq = load_sequence(src);
      const double e = eps >= 0 ? eps : (nbs_sequence_is_exact(seq.get()) ? 0.0 : 0.05);
      check(nbs_right_limits(seq.get(), window, horizon, e, max_candidates, min_rec, &report));
      return finish(out, report);
    }
    if (cert->parsed()) {
      SeqPtr seq = load_sequence(src);
      nbs_search_params p;
      nbs_search_params_init(&p);
      p.window = window;
      p.horizon = horizon;
      p.eps = eps;
      p.delta = delta;
      p.min_recurrence = min_rec;
      p.flank = flank == "backward" ? NBS_FLANK_BACKWARD
                : flank == "forward" ? NBS_FLANK_FORWARD
                                     : NBS_FLANK_BOTH;
      if (decay_C || decay_D) {
        if (!decay_C || !decay_D) throw Failure(kUsage, "--decay-C and --decay-D go together");
        p.has_decay = 1;
        p.decay_C = *decay_C;
        p.decay_D = *decay_D;
      }
      const auto m = mode == "gap" ? NBS_CERT_GAP : mode == "pair" ? NBS_CERT_PAIR : NBS_CERT_ANY;
      check(nbs_certificate(seq.get(), &p, m, &report));
      return finish(out, report);
    }
    if (sz->parsed()) {
      SeqPtr seq = load_sequence(src);
      check(nbs_szego(seq.get(), p_max, horizon, &report));
      return finish(out, report);
    }
    if (per->parsed()) {
      SeqPtr seq = load_sequence(src);
      check(nbs_periodicity(seq.get(), max_period, max_preperiod, horizon, tol, &report));
      return finish(out, report);
    }
    if (probe->parsed()) {
      SeqPtr seq = load_sequence(src);
      const std::vector<double> radii = parse_reals(radii_text, "--radii");
      int full = 1;
      double alpha = 0, beta = 0;
      if (arc != "full") {
        const auto ab = parse_reals(arc, "--arc");
        if (ab.size() != 2) throw Failure(kUsage, "--arc takes full or alpha,beta");
        full = 0;
        alpha = ab[0];
        beta = ab[1];
      }
      check(nbs_probe(seq.get(), full, alpha, beta, radii.data(), radii.size(), quad_points,
                      probe_tol, &report));
      return finish(out, report, true);
    }
    if (refl->parsed()) {
      if (refl_pattern.empty() == refl_values.empty()) {
        throw Failure(kUsage, "give exactly one of --pattern (periodic) or --values (decay rule)");
      }
      const auto list = parse_list(refl_pattern.empty() ? refl_values : refl_pattern,
                                   refl_pattern.empty() ? "--values" : "--pattern");
      std::vector<double> re, im;
      for (const auto& v : list) {
        re.push_back(v.is_array() ? v[0].get<double>() : v.get<double>());
        im.push_back(v.is_array() ? v[1].get<double>() : 0.0);
      }
      if (!refl_pattern.empty()) {
        int full = 1;
        double alpha = 0, beta = 0;
        if (arc != "full") {
          const auto ab = parse_reals(arc, "--arc");
          if (ab.size() != 2) throw Failure(kUsage, "--arc takes full or alpha,beta");
          full = 0;
          alpha = ab[0];
          beta = ab[1];
        }
        check(nbs_reflectionless_periodic(re.data(), im.data(), re.size(), full, alpha, beta,
                                          &report));
      } else {
        if (re.size() % 2 == 0) throw Failure(kUsage, "--values needs 2W+1 entries");
        const auto W = static_cast<std::int64_t>(re.size() / 2);
        check(nbs_decay_rule(re.data(), im.data(), W, side == "positive" ? 0 : 1, C, D, refl_delta,
                             &report));
      }
      return finish(out, report);
    }
    if (mc->parsed()) {
      if (process_file.empty() == process_json.empty()) {
        throw Failure(kUsage, "give exactly one of --process or --process-json");
      }
      std::string text = process_file.empty() ? process_json : read_file(process_file);
      if (seed) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
          throw Failure(kUsage, std::string("malformed process JSON: ") + e.what());
        }
        j["seed"] = *seed;
        text = j.dump();
      }
      check(nbs_montecarlo(text.c_str(), trials, mc_window, mc_horizon, mc_eps, mc_delta, &report));
      return finish(out, report);
    }
    if (ver->parsed()) {
      SeqPtr seq = load_sequence(src);
      nbs_verdict_params p;
      nbs_verdict_params_init(&p);
      p.window = window;
      p.horizon = horizon;
      p.eps = eps;
      p.delta = delta;
      p.min_recurrence = min_rec;
      p.p_max = p_max;
      p.max_period = max_period_v;
      p.max_preperiod = max_preperiod_v;
      check(nbs_verdict(seq.get(), &p, &report));
      return finish(out, report);
    }
  } catch (const Failure& f) {
    std::cerr << "nbscope: " << f.what() << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "nbscope: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
