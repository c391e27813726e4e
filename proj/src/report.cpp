#include <nbscope/report.hpp>

#include "detail.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace nbscope {

using detail::reject;
using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Parsing

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  reject("expected a number or [re, im], got ", j.dump());
}

std::vector<Complex> parse_complex_list(const Json& j, const char* field) {
  if (!j.is_array()) reject("'", field, "' must be an array");
  std::vector<Complex> out;
  for (const Json& x : j) out.push_back(parse_complex(x));
  return out;
}

const Json& require(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) reject("missing field '", field, "'");
  return j.at(field);
}

std::string require_string(const Json& j, const char* field) {
  const Json& v = require(j, field);
  if (!v.is_string()) reject("'", field, "' must be a string");
  return v.get<std::string>();
}

double number_or(const Json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number()) reject("'", field, "' must be a number");
  return j.at(field).get<double>();
}

BoundaryFn parse_boundary_fn(const std::string& s) {
  if (s == "fractional-part") return BoundaryFn::FractionalPart;
  if (s == "half-step") return BoundaryFn::HalfStep;
  if (s == "constant") return BoundaryFn::Constant;
  reject("unknown boundary function '", s, "' (fractional-part, half-step, constant)");
}

RotationSpec parse_rotation(const Json& j) {
  RotationSpec r;
  r.fn = parse_boundary_fn(j.value("fn", std::string("fractional-part")));
  r.constant = number_or(j, "constant", 0.0);
  const Json& q = require(j, "q");
  if (q.is_string()) {
    r.q = DoubleDouble::parse(q.get<std::string>());
  } else if (q.is_number()) {
    r.q = DoubleDouble::from(q.get<double>());
  } else {
    reject("'q' must be a number or a named constant");
  }
  r.theta = number_or(j, "theta", 0.0);
  return r;
}

ProcessSpec parse_process(const Json& j) {
  ProcessSpec spec;
  const std::string kind = require_string(j, "kind");
  if (kind == "iid") {
    const Json& d = require(j, "distribution");
    const std::string type = require_string(d, "type");
    IidProcess iid;
    if (type == "discrete") {
      DiscreteDistribution dist;
      dist.support = parse_complex_list(require(d, "support"), "support");
      const Json& p = require(d, "probabilities");
      if (!p.is_array()) reject("'probabilities' must be an array");
      for (const Json& x : p) {
        if (!x.is_number()) reject("probabilities must be numbers");
        dist.probabilities.push_back(x.get<double>());
      }
      iid.distribution = dist;
    } else if (type == "uniform-interval") {
      iid.distribution = UniformInterval{number_or(d, "lo", -1.0), number_or(d, "hi", 1.0)};
    } else if (type == "uniform-disk") {
      iid.distribution = UniformDisk{number_or(d, "radius", 1.0)};
    } else {
      reject("unknown distribution type '", type, "'");
    }
    spec.kind = iid;
  } else if (kind == "markov") {
    MarkovProcess mk;
    const Json& t = require(j, "transition");
    if (!t.is_array()) reject("'transition' must be a matrix");
    for (const Json& row : t) {
      if (!row.is_array()) reject("'transition' must be a matrix");
      std::vector<double> r;
      for (const Json& x : row) {
        if (!x.is_number()) reject("transition entries must be numbers");
        r.push_back(x.get<double>());
      }
      mk.transition.push_back(std::move(r));
    }
    mk.emission = parse_complex_list(require(j, "emission"), "emission");
    spec.kind = mk;
  } else if (kind == "rotation") {
    spec.kind = RotationProcess{parse_rotation(j)};
  } else {
    reject("unknown process kind '", kind, "' (iid, markov, rotation)");
  }
  spec.bound = number_or(j, "bound", 1.0);
  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (!s.is_number_integer()) reject("'seed' must be an integer");
    spec.seed = s.is_number_unsigned() ? s.get<std::uint64_t>()
                                       : static_cast<std::uint64_t>(s.get<std::int64_t>());
  }
  validate(spec);
  return spec;
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    reject("malformed JSON: ", e.what());
  }
}

// ---------------------------------------------------------------------------
// Emission

Json complex_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json envelope(const char* report, const OneSidedSequence* seq) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = report;
  if (seq) {
    j["sequence"] = {{"label", seq->label()},
                     {"bound", seq->bound()},
                     {"value_kind", to_string(seq->value_kind())}};
    if (auto ext = seq->extent()) j["sequence"]["extent"] = *ext;
  }
  return j;
}

Json window_json(const TwoSidedWindow& w) {
  Json values = Json::array();
  for (const Complex& v : w.values) values.push_back(complex_json(v));
  return {{"radius", w.radius}, {"values", values}};
}

Json certificate_json(const NonReflectionlessCertificate& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  if (c.kind == CertificateKind::GapZeroFlank) {
    j["hits"] = c.hits;
  } else {
    Json pairs = Json::array();
    for (auto [n, m] : c.pairs) pairs.push_back(Json::array({n, m}));
    j["pairs"] = pairs;
  }
  j["flank"] = {{"side", to_string(c.side)}, {"offsets", Json::array({1, c.flank_width})}};
  j["eps"] = c.eps;
  j["delta"] = c.delta;
  j["min_separation"] = finite_or_null(c.min_separation);
  if (c.decay) j["decay"] = {{"C", c.decay->C}, {"D", c.decay->D}};
  return j;
}

Json witness_json(const SzegoWitness& w) {
  return {{"p", w.p}, {"P", w.P}, {"Q", w.Q}, {"L", w.L}};
}

Json polynomial_json(const Polynomial& p) {
  Json out = Json::array();
  for (const Rational& c : p.coefficients()) out.push_back(to_string(c));
  return out;
}

Json rational_form_json(const RationalForm& f) {
  Json j;
  j["exact"] = f.exact;
  if (f.exact) {
    j["numerator"] = polynomial_json(f.numerator);
    j["denominator"] = polynomial_json(f.denominator);
  } else {
    Json num = Json::array(), den = Json::array();
    for (const Complex& c : f.float_numerator) num.push_back(complex_json(c));
    for (const Complex& c : f.float_denominator) den.push_back(complex_json(c));
    j["numerator"] = num;
    j["denominator"] = den;
  }
  Json poles = Json::array();
  for (const RootOfUnity& r : f.poles) poles.push_back({{"k", r.k}, {"d", r.d}, {"angle", r.angle()}});
  j["poles"] = poles;
  return j;
}

Json arc_json(const ArcSpec& a) {
  if (a.full) return "full";
  return {{"alpha", a.alpha}, {"beta", a.beta}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

GeneratorSpec parse_generator_spec(const std::string& text) {
  const Json j = parse_text(text);
  const std::string family = require_string(j, "family");
  if (family == "periodic") return PeriodicSpec{parse_complex_list(require(j, "pattern"), "pattern")};
  if (family == "gap-powers") {
    GapPowersSpec g;
    const std::string set = require_string(j, "set");
    if (set == "factorials") {
      g.set = ExponentSet::Factorials;
    } else if (set == "squares") {
      g.set = ExponentSet::Squares;
    } else if (set == "powers-of-two") {
      g.set = ExponentSet::PowersOfTwo;
    } else if (set == "explicit") {
      g.set = ExponentSet::Explicit;
      const Json& e = require(j, "exponents");
      if (!e.is_array()) reject("'exponents' must be an array");
      for (const Json& x : e) {
        if (!x.is_number_integer()) reject("exponents must be integers");
        g.exponents.push_back(x.get<Index>());
      }
    } else {
      reject("unknown exponent set '", set, "' (factorials, squares, powers-of-two, explicit)");
    }
    if (j.contains("fill")) g.fill = parse_complex(j.at("fill"));
    return g;
  }
  if (family == "rudin-shapiro") return RudinShapiroSpec{};
  if (family == "rotation") return parse_rotation(j);
  if (family == "erdos") {
    const std::string edge = j.value("edge", std::string("hard"));
    if (edge != "hard" && edge != "soft") reject("erdos edge must be hard or soft");
    return ErdosSpec{edge == "hard" ? ErdosEdge::Hard : ErdosEdge::Soft};
  }
  if (family == "explicit") return ExplicitSpec{parse_complex_list(require(j, "values"), "values")};
  if (family == "stochastic") {
    StochasticSpec s;
    s.process = std::make_shared<const ProcessSpec>(parse_process(require(j, "process")));
    const Json& len = require(j, "length");
    if (!len.is_number_integer()) reject("'length' must be an integer");
    s.length = len.get<Index>();
    return s;
  }
  reject("unknown family '", family, "'");
}

ProcessSpec parse_process_spec(const std::string& text) { return parse_process(parse_text(text)); }

std::string report_json(const RightLimitResult& r, const OneSidedSequence& seq, Index horizon) {
  Json j = envelope("right_limits", &seq);
  j["horizon"] = horizon;
  j["windows_scanned"] = r.windows_scanned;
  j["clusters_total"] = r.clusters_total;
  j["truncated"] = r.truncated;
  Json cands = Json::array();
  for (const RightLimitCandidate& c : r.candidates) {
    Json cj = window_json(c.window);
    cj["eps"] = c.eps;
    cj["population"] = c.recurrence_indices.size();
    cj["recurrence_indices"] = c.recurrence_indices;
    cands.push_back(cj);
  }
  j["candidates"] = cands;
  return dump(j);
}

std::string report_json(const std::optional<NonReflectionlessCertificate>& cert,
                        const OneSidedSequence& seq, Index horizon, bool pair_overflow) {
  Json j = envelope("certificate", &seq);
  j["horizon"] = horizon;
  j["found"] = cert.has_value();
  j["bucket_overflow"] = pair_overflow;
  j["certificate"] = cert ? certificate_json(*cert) : Json(nullptr);
  return dump(j);
}

std::string report_json(const SzegoReport& r, const OneSidedSequence& seq) {
  Json j = envelope("szego", &seq);
  j["horizon"] = r.horizon;
  Json values = Json::array();
  for (const Complex& v : r.value_set) values.push_back(complex_json(v));
  j["value_set"] = values;
  Json blocks = Json::array();
  for (const SzegoBlockResult& b : r.blocks) {
    Json bj = {{"p", b.p}};
    switch (b.outcome) {
      case SzegoOutcome::Witness: bj["outcome"] = "witness"; break;
      case SzegoOutcome::NoMismatchWithinHorizon: bj["outcome"] = "no-mismatch-within-horizon"; break;
      case SzegoOutcome::Skipped: bj["outcome"] = "skipped"; break;
    }
    if (b.witness) bj["witness"] = witness_json(*b.witness);
    if (!b.note.empty()) bj["note"] = b.note;
    blocks.push_back(bj);
  }
  j["witnesses"] = blocks;
  j["overall"] = to_string(r.overall);
  if (r.periodicity) {
    j["periodicity"] = {{"preperiod", r.periodicity->preperiod}, {"period", r.periodicity->period}};
  }
  return dump(j);
}

std::string report_json(const std::optional<Periodicity>& p, const OneSidedSequence& seq,
                        Index horizon, double tol) {
  Json j = envelope("periodicity", &seq);
  j["horizon"] = horizon;
  j["tol"] = tol;
  j["found"] = p.has_value();
  if (p) {
    j["preperiod"] = p->preperiod;
    j["period"] = p->period;
  }
  return dump(j);
}

std::string report_json(const Verdict& v, const OneSidedSequence& seq, const VerdictConfig& config) {
  Json j = envelope("verdict", &seq);
  j["kind"] = verdict_name(v);
  j["config"] = {{"window", config.window},
                 {"horizon", config.horizon},
                 {"eps", config.eps ? Json(*config.eps) : Json(nullptr)},
                 {"delta", config.delta},
                 {"min_recurrence", config.min_recurrence},
                 {"p_max", config.p_max}};
  if (const auto* s = std::get_if<StrongNaturalBoundaryEvidence>(&v)) {
    j["certificate"] = s->certificate ? certificate_json(*s->certificate) : Json(nullptr);
    Json w = Json::array();
    for (const SzegoWitness& x : s->szego_witnesses) w.push_back(witness_json(x));
    j["witnesses"] = w;
  } else if (const auto* n = std::get_if<NaturalBoundaryEvidence>(&v)) {
    j["certificate"] = certificate_json(n->certificate);
  } else if (const auto* e = std::get_if<EventuallyPeriodic>(&v)) {
    j["preperiod"] = e->periodicity.preperiod;
    j["period"] = e->periodicity.period;
    j["rational_form"] = rational_form_json(e->rational);
  } else {
    const auto& i = std::get<Inconclusive>(v);
    j["reason"] = i.reason;
    j["probes"] = i.probes;
  }
  j["verified"] = verify(v, seq, config);
  return dump(j);
}

std::string report_json(const BoundaryProbeReport& r, const OneSidedSequence& seq) {
  Json j = envelope("boundary_probe", &seq);
  j["arc"] = arc_json(r.arc);
  j["quad_points"] = r.quad_points;
  j["tol"] = r.tol;
  Json radii = Json::array();
  for (const RadiusIntegral& ri : r.radii) {
    Json x = {{"r", ri.r}, {"terms", ri.terms}};
    if (ri.skipped) {
      x["skipped"] = true;
      x["reason"] = ri.skip_reason;
    } else {
      x["integral"] = ri.integral;
      x["quad_err"] = ri.quad_err;
      x["trunc_err"] = ri.trunc_err;
    }
    radii.push_back(x);
  }
  j["radii"] = radii;
  if (r.growth_fit) {
    j["growth_fit"] = {{"intercept", r.growth_fit->intercept},
                       {"slope", r.growth_fit->slope},
                       {"rel_residual", r.growth_fit->rel_residual},
                       {"points", r.growth_fit->points}};
  } else {
    j["growth_fit"] = nullptr;
  }
  return dump(j);
}

std::string report_json(const ReflectionlessCheck& r, const ArcSpec& arc) {
  Json j = envelope("reflectionless_periodic", nullptr);
  j["arc"] = arc_json(arc);
  j["pass"] = r.pass;
  j["reason"] = r.reason;
  j["reduced"] = rational_form_json(r.reduced);
  Json poles = Json::array();
  for (const RootOfUnity& p : r.poles_on_arc) poles.push_back({{"k", p.k}, {"d", p.d}});
  j["poles_on_arc"] = poles;
  j["samples"] = r.samples;
  j["max_numeric_residual"] = r.max_numeric_residual;
  j["max_allowed_residual"] = r.max_allowed_residual;
  return dump(j);
}

std::string report_json(const DecayRuleResult& r, DecaySide side, double C, double D, double delta) {
  Json j = envelope("decay_rule", nullptr);
  j["side"] = side == DecaySide::Positive ? "positive" : "negative";
  j["C"] = C;
  j["D"] = D;
  j["delta"] = delta;
  j["outcome"] = r.not_reflectionless ? "NotReflectionless" : "ConsistentWithZero";
  if (r.not_reflectionless) {
    j["witness"] = r.witness;
    j["witness_abs"] = r.witness_abs;
  }
  return dump(j);
}

std::string report_json(const MonteCarloReport& r) {
  Json j = envelope("montecarlo", nullptr);
  j["seed"] = r.spec.seed;
  j["bound"] = r.spec.bound;
  j["trials"] = r.trials;
  j["window"] = r.window;
  j["horizon"] = r.horizon;
  j["eps"] = r.eps;
  j["delta"] = r.delta;
  j["hits"] = r.hits;
  j["hit_rate"] = r.hit_rate;
  Json trials = Json::array();
  for (const TrialOutcome& o : r.outcomes) {
    Json t = {{"trial", o.trial}, {"stream", o.stream}, {"found", o.found}};
    t["certificate"] = o.certificate ? certificate_json(*o.certificate) : Json(nullptr);
    t["variance"] = {{"value", o.variance.variance}, {"standard_error", o.variance.standard_error}};
    if (o.separation) {
      const Separation& s = *o.separation;
      t["separation"] = {{"z", complex_json(s.z)},          {"w", complex_json(s.w)},
                         {"prob_z", s.prob_z},              {"prob_w", s.prob_w},
                         {"distance", s.distance},          {"target", s.threshold},
                         {"cover_size", s.cover_size},      {"m", s.m_used},
                         {"min_probability", s.min_probability}};
    } else {
      t["separation"] = nullptr;
    }
    trials.push_back(t);
  }
  j["outcomes"] = trials;
  return dump(j);
}

std::string report_json(const EvalResult& r, Complex z) {
  Json j = envelope("eval", nullptr);
  j["z"] = Json::array({z.real(), z.imag()});
  j["value"] = Json::array({r.value.real(), r.value.imag()});
  j["abs_error_bound"] = r.abs_error_bound;
  j["truncation_bound"] = r.truncation_bound;
  j["terms_used"] = r.terms_used;
  return dump(j);
}

std::string probe_csv(const BoundaryProbeReport& r) {
  std::ostringstream os;
  os << "r,integral,quad_err,trunc_err\n" << std::setprecision(17);
  for (const RadiusIntegral& ri : r.radii) {
    if (ri.skipped) continue;
    os << ri.r << ',' << ri.integral << ',' << ri.quad_err << ',' << ri.trunc_err << '\n';
  }
  return os.str();
}

}  // namespace nbscope
