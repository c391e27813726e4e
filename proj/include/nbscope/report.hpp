// JSON and CSV emission for every analysis, and JSON parsing of generator
// and process specifications. Every JSON report carries schema_version 1.

#pragma once

#include <nbscope/analytic.hpp>
#include <nbscope/random_series.hpp>
#include <nbscope/right_limits.hpp>
#include <nbscope/sequence.hpp>

#include <optional>
#include <string>

namespace nbscope {

inline constexpr int kSchemaVersion = 1;

/// {"family": "periodic", "pattern": [1, 0]} and so on; complex entries are
/// written as [re, im]. Throws std::invalid_argument on malformed input.
GeneratorSpec parse_generator_spec(const std::string& json);
ProcessSpec parse_process_spec(const std::string& json);

std::string report_json(const RightLimitResult& r, const OneSidedSequence& seq, Index horizon);
std::string report_json(const std::optional<NonReflectionlessCertificate>& cert,
                        const OneSidedSequence& seq, Index horizon, bool pair_overflow);
std::string report_json(const SzegoReport& r, const OneSidedSequence& seq);
std::string report_json(const std::optional<Periodicity>& p, const OneSidedSequence& seq,
                        Index horizon, double tol);
std::string report_json(const Verdict& v, const OneSidedSequence& seq, const VerdictConfig& config);
std::string report_json(const BoundaryProbeReport& r, const OneSidedSequence& seq);
std::string report_json(const ReflectionlessCheck& r, const ArcSpec& arc);
std::string report_json(const DecayRuleResult& r, DecaySide side, double C, double D, double delta);
std::string report_json(const MonteCarloReport& r);
std::string report_json(const EvalResult& r, Complex z);

/// Header r,integral,quad_err,trunc_err; skipped radii are omitted.
std::string probe_csv(const BoundaryProbeReport& r);

}  // namespace nbscope
