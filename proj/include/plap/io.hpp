#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "plap/bounds.hpp"
#include "plap/problem.hpp"
#include "plap/solver.hpp"

namespace plap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "plap 1.0.0";

/// A parsed problem file: the spec plus the optional extras a file may carry.
struct ProblemFile {
    ProblemSpec spec;
    std::optional<double> gamma;
    bool explicit_envelope = false;
    Json reference_values;   ///< null when absent
};

/// Throws ParseError (with line and column), SchemaError (naming the field), InvariantError.
ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem(const std::string& path);

/// Inverse of parse_problem_text for the builtin kinds. Throws SchemaError for custom f.
Json serialize_problem(const ProblemFile& file);

Json constants_json(const InstanceConstants& c);
Json thresholds_json(const LambdaThresholds& t);
Json regime_json(const Regime& r);
Json envelope_json(const EnvelopeReport& r, const Graph& g);

Json validate_report(const ProblemFile& file);
Json bounds_report(const ProblemFile& file, std::optional<double> gamma);
Json solve_report(const ProblemFile& file, const SolveReport& rep, const SolverOptions& opts);

/// Labels → values over S̄ (missing boundary entries default to 0).
Eigen::VectorXd parse_vertex_values(const Graph& g, const Json& values);

struct Certificate {
    Json report;
    bool ok;
};

/// Recomputes residual_original and positivity. Accepts {"values": {...}} or a solve report
/// (every listed solution is checked).
Certificate certify(const ProblemSpec& spec, const Json& solution, double tol = 1e-8);

} // namespace plap
