#include "plap/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "plap/energy.hpp"

namespace plap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void schema(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::SchemaError, field + ": " + what);
}

void allow_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) schema(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!ok.count(k)) schema(where + "." + k, "unknown key");
}

const Json& need(const Json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) schema(where + "." + key, "missing");
    return obj.at(key);
}

double number(const Json& v, const std::string& where) {
    if (!v.is_number()) schema(where, "expected a number");
    return v.get<double>();
}

std::vector<std::string> label_list(const Json& v, const std::string& where) {
    if (!v.is_array()) schema(where, "expected an array of labels");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) schema(where, "labels must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

/// A table over the vertices [first, first+count): either one number for all or a label map.
Eigen::VectorXd table(const Json& v, const Graph& g, Index first, Index count, const std::string& where) {
    Eigen::VectorXd out(count);
    if (v.is_number()) {
        out.setConstant(v.get<double>());
        return out;
    }
    if (!v.is_object()) schema(where, "expected a number or a map from vertex label to number");
    for (const auto& [k, val] : v.items()) {
        if (!g.contains(k)) schema(where + "." + k, "unknown vertex");
        const Index i = g.index_of(k);
        if (i < first || i >= first + count) schema(where + "." + k, "vertex outside the table's domain");
    }
    for (Index i = 0; i < count; ++i) {
        const auto& label = g.label(first + i);
        if (!v.contains(label)) schema(where + "." + label, "missing");
        out(i) = number(v.at(label), where + "." + label);
    }
    return out;
}

Json label_map(const Graph& g, const Eigen::VectorXd& v, Index first = 0) {
    Json out = Json::object();
    for (Index i = 0; i < v.size(); ++i) out[g.label(first + i)] = v(i);
    return out;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

ProblemFile parse_problem_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte);
        std::ostringstream os;
        os << "line " << line << ", column " << col << ": " << e.what();
        throw Error(ErrorCode::ParseError, os.str());
    }
    allow_keys(doc, "problem", {"graph", "p", "q", "nonlinearity", "lambda", "gamma", "reference_values"});

    const Json& gj = need(doc, "problem", "graph");
    allow_keys(gj, "graph", {"interior", "boundary", "edges"});
    auto interior = label_list(need(gj, "graph", "interior"), "graph.interior");
    auto boundary = label_list(need(gj, "graph", "boundary"), "graph.boundary");
    const Json& ej = need(gj, "graph", "edges");
    if (!ej.is_array()) schema("graph.edges", "expected an array");
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < ej.size(); ++i) {
        const std::string where = "graph.edges[" + std::to_string(i) + "]";
        allow_keys(ej[i], where, {"u", "v", "w"});
        const Json& u = need(ej[i], where, "u");
        const Json& v = need(ej[i], where, "v");
        if (!u.is_string() || !v.is_string()) schema(where, "endpoints must be labels");
        edges.push_back({u.get<std::string>(), v.get<std::string>(), number(need(ej[i], where, "w"), where + ".w")});
    }
    Graph g = build_graph(interior, boundary, edges);
    const Index ns = g.interior_size();

    auto p = ExponentField::make(g, table(need(doc, "problem", "p"), g, 0, g.size(), "p"));
    auto q = Potential::make(g, table(need(doc, "problem", "q"), g, 0, ns, "q"));

    const Json& nj = need(doc, "problem", "nonlinearity");
    allow_keys(nj, "nonlinearity", {"kind", "parameters", "envelope"});
    const Json& kind = need(nj, "nonlinearity", "kind");
    if (!kind.is_string()) schema("nonlinearity.kind", "expected a string");
    const Json& pj = need(nj, "nonlinearity", "parameters");
    allow_keys(pj, "nonlinearity.parameters", {"phi", "m", "psi"});
    auto phi = table(need(pj, "nonlinearity.parameters", "phi"), g, 0, ns, "nonlinearity.parameters.phi");
    auto m = table(need(pj, "nonlinearity.parameters", "m"), g, 0, ns, "nonlinearity.parameters.m");
    auto psi = table(need(pj, "nonlinearity.parameters", "psi"), g, 0, ns, "nonlinearity.parameters.psi");
    Nonlinearity f;
    if (kind == "power_plus") f = power_plus(phi, m, psi);
    else if (kind == "modulated_power") f = modulated_power(m, phi, psi);
    else schema("nonlinearity.kind", "unknown kind '" + kind.get<std::string>() + "'");

    ProblemFile file{ProblemSpec{}, std::nullopt, false, Json()};
    if (nj.contains("envelope")) {
        const Json& env = nj.at("envelope");
        allow_keys(env, "nonlinearity.envelope", {"m1", "m2", "phi1", "phi2", "psi1", "psi2"});
        auto field = [&](const char* k) {
            return table(need(env, "nonlinearity.envelope", k), g, 0, ns, std::string("nonlinearity.envelope.") + k);
        };
        f.envelope = GrowthEnvelope::make(field("m1"), field("m2"), field("phi1"), field("phi2"), field("psi1"),
                                          field("psi2"));
        file.explicit_envelope = true;
    }
    if (f.envelope) {
        auto rep = check_envelope(f);
        if (!rep.violations.empty()) {
            const auto& v = rep.violations.front();
            std::ostringstream os;
            os << "declared envelope violates the growth condition (" << v.bound << ") at " << g.label(v.vertex)
               << ", t = " << v.t << ": value " << v.value << " vs bound " << v.limit;
            throw Error(ErrorCode::InvariantError, os.str());
        }
    }

    const double lambda = number(need(doc, "problem", "lambda"), "lambda");
    file.spec = make_problem(std::move(g), std::move(p), std::move(q), std::move(f), lambda);
    if (doc.contains("gamma")) file.gamma = number(doc.at("gamma"), "gamma");
    if (doc.contains("reference_values")) {
        const Json& r = doc.at("reference_values");
        if (!r.is_object()) schema("reference_values", "expected an object");
        for (const auto& [k, v] : r.items()) number(v, "reference_values." + k);
        file.reference_values = r;
    }
    return file;
}

ProblemFile parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

Json serialize_problem(const ProblemFile& file) {
    const auto& s = file.spec;
    const auto& g = s.graph;
    Json doc;
    Json gj;
    gj["interior"] = Json::array();
    gj["boundary"] = Json::array();
    for (Index i = 0; i < g.size(); ++i) (g.is_interior(i) ? gj["interior"] : gj["boundary"]).push_back(g.label(i));
    gj["edges"] = Json::array();
    for (const auto& [x, y, w] : g.edges()) gj["edges"].push_back({{"u", g.label(x)}, {"v", g.label(y)}, {"w", w}});
    doc["graph"] = gj;
    doc["p"] = label_map(g, s.p.values);
    doc["q"] = label_map(g, s.q.values);

    Json nj;
    if (const auto* pp = std::get_if<PowerPlus>(&s.f.kind)) {
        nj["kind"] = "power_plus";
        nj["parameters"] = {{"phi", label_map(g, pp->phi)}, {"m", label_map(g, pp->m)}, {"psi", label_map(g, pp->psi)}};
    } else if (const auto* mp = std::get_if<ModulatedPower>(&s.f.kind)) {
        nj["kind"] = "modulated_power";
        nj["parameters"] = {{"phi", label_map(g, mp->phi)}, {"m", label_map(g, mp->m)}, {"psi", label_map(g, mp->psi)}};
    } else {
        schema("nonlinearity.kind", "custom nonlinearities cannot be serialized");
    }
    if (file.explicit_envelope && s.f.envelope) {
        const auto& e = *s.f.envelope;
        nj["envelope"] = {{"m1", label_map(g, e.m1)},     {"m2", label_map(g, e.m2)},
                          {"phi1", label_map(g, e.phi1)}, {"phi2", label_map(g, e.phi2)},
                          {"psi1", label_map(g, e.psi1)}, {"psi2", label_map(g, e.psi2)}};
    }
    doc["nonlinearity"] = nj;
    doc["lambda"] = s.lambda;
    if (file.gamma) doc["gamma"] = *file.gamma;
    if (!file.reference_values.is_null()) doc["reference_values"] = file.reference_values;
    return doc;
}

Json constants_json(const InstanceConstants& c) {
    Json j;
    j["n_interior"] = c.n_interior;
    j["n_boundary"] = c.n_boundary;
    j["n_total"] = c.n_total;
    j["omega_max"] = c.omega_max;
    j["p_minus"] = c.p_minus;
    j["p_plus"] = c.p_plus;
    j["pbar_minus"] = c.pbar_minus;
    j["pbar_plus"] = c.pbar_plus;
    j["q_minus"] = c.q_minus;
    j["q_plus"] = c.q_plus;
    j["has_envelope"] = c.has_envelope;
    j["m1_minus"] = finite_or_null(c.m1_minus);
    j["m1_plus"] = finite_or_null(c.m1_plus);
    j["m2_minus"] = finite_or_null(c.m2_minus);
    j["m2_plus"] = finite_or_null(c.m2_plus);
    j["phi1_minus"] = finite_or_null(c.phi1_minus);
    j["phi2_plus"] = finite_or_null(c.phi2_plus);
    j["psi1_minus"] = finite_or_null(c.psi1_minus);
    j["psi2_plus"] = finite_or_null(c.psi2_plus);
    return j;
}

Json thresholds_json(const LambdaThresholds& t) {
    Json j;
    j["lambda1"] = finite_or_null(t.lambda1);
    j["lambda2"] = finite_or_null(t.lambda2);
    j["gamma0"] = t.gamma0;
    j["omega_radius"] = t.omega_radius;
    if (t.gamma) j["gamma"] = *t.gamma;
    if (t.lambda3) j["lambda3"] = finite_or_null(*t.lambda3);
    if (t.t0) j["t0"] = finite_or_null(*t.t0);
    return j;
}

Json regime_json(const Regime& r) {
    Json j = Json::array();
    for (auto t : r.tags) j.push_back(to_string(t));
    return j;
}

Json envelope_json(const EnvelopeReport& r, const Graph& g) {
    Json j;
    j["declared"] = r.declared;
    j["points_checked"] = r.points_checked;
    j["ok"] = r.ok();
    Json v = Json::array();
    for (std::size_t i = 0; i < r.violations.size() && i < 20; ++i) {
        const auto& e = r.violations[i];
        v.push_back({{"vertex", g.label(e.vertex)}, {"t", e.t}, {"bound", e.bound}, {"value", e.value}, {"limit", e.limit}});
    }
    j["violations"] = v;
    j["violation_count"] = r.violations.size();
    return j;
}

Json validate_report(const ProblemFile& file) {
    const auto& s = file.spec;
    Json j;
    j["tool"] = kToolVersion;
    j["command"] = "validate";
    auto vr = validate_graph(s.graph);
    Json checks = Json::array();
    for (const auto& c : vr.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["graph_checks"] = checks;
    auto sum = graph_summary(s.graph);
    Json deg = Json::object();
    for (Index i = 0; i < s.graph.size(); ++i) deg[s.graph.label(i)] = sum.degree[std::size_t(i)];
    j["degrees"] = deg;
    j["constants"] = constants_json(instance_constants(s));
    j["envelope"] = envelope_json(check_envelope(s.f), s.graph);
    j["valid"] = vr.ok();
    return j;
}

Json bounds_report(const ProblemFile& file, std::optional<double> gamma) {
    const auto& s = file.spec;
    const auto c = instance_constants(s);
    if (!gamma) gamma = file.gamma;
    Json j;
    j["tool"] = kToolVersion;
    j["command"] = "bounds";
    j["constants"] = constants_json(c);
    const auto t = lambda_thresholds(c, gamma, s.lambda);
    j["thresholds"] = thresholds_json(t);
    j["lambda"] = s.lambda;
    j["regime"] = regime_json(classify_regime(c, s.lambda, gamma));
    Json ineq = Json::object();
    for (auto w : all_inequalities()) {
        const double m = w == Inequality::A1 ? 1.0 : 2.0;
        auto k = inequality_bound(w, c, m);
        Json e{{"factor", k.factor}};
        if (w == Inequality::A4 || w == Inequality::A5 || w == Inequality::A6) e["offset"] = k.offset;
        if (w == Inequality::A1 || w == Inequality::A2 || w == Inequality::A3) e["m"] = m;
        ineq[to_string(w)] = e;
    }
    j["inequality_constants"] = ineq;
    if (!file.reference_values.is_null()) {
        const Json tj = thresholds_json(t);
        Json cmp = Json::object();
        for (const auto& [k, v] : file.reference_values.items()) {
            Json e{{"reference", v}};
            if (tj.contains(k) && tj[k].is_number()) {
                const double comp = tj[k].get<double>(), ref = v.get<double>();
                e["computed"] = comp;
                e["relative_difference"] = ref != 0 ? std::abs(comp - ref) / std::abs(ref) : std::abs(comp);
            } else {
                e["computed"] = nullptr;
            }
            cmp[k] = e;
        }
        j["reference_comparison"] = {{"note", "reference values are informational; thresholds follow the formulas"},
                                     {"values", cmp}};
    }
    return j;
}

Json solve_report(const ProblemFile& file, const SolveReport& rep, const SolverOptions& opts) {
    const auto& s = file.spec;
    Json j;
    j["tool"] = kToolVersion;
    j["command"] = "solve";
    j["seed"] = rep.seed;
    j["grad_tol"] = opts.grad_tol;
    j["lambda"] = s.lambda;
    j["constants"] = constants_json(instance_constants(s));
    j["thresholds"] = thresholds_json(rep.thresholds);
    j["regime"] = regime_json(rep.regime);
    auto point = [&](const CriticalPoint& cp) {
        Json e;
        e["values"] = label_map(s.graph, cp.u);
        e["J"] = finite_or_null(cp.value);
        e["residual_inf"] = finite_or_null(cp.residual_inf);
        e["gradient_inf"] = finite_or_null(cp.gradient_inf);
        e["residual_original"] = finite_or_null(cp.residual_original);
        e["norm"] = cp.norm;
        e["positive"] = cp.positive_on_S;
        e["kind"] = to_string(cp.kind);
        e["origin"] = cp.origin;
        e["status"] = to_string(cp.status);
        return e;
    };
    Json sols = Json::array();
    for (const auto& cp : rep.solutions) sols.push_back(point(cp));
    j["solutions"] = sols;
    Json rej = Json::array();
    for (const auto& cp : rep.rejected) rej.push_back(point(cp));
    j["rejected_candidates"] = rej;
    if (rep.kkt)
        j["kkt"] = {{"sigma", rep.kkt->sigma},
                    {"theta", rep.kkt->theta},
                    {"kappa", rep.kkt->kappa},
                    {"stationarity", rep.kkt->stationarity}};
    if (rep.sphere_min_estimate) j["sphere_min_estimate"] = *rep.sphere_min_estimate;
    j["notes"] = rep.notes;
    return j;
}

Eigen::VectorXd parse_vertex_values(const Graph& g, const Json& values) {
    if (!values.is_object()) schema("values", "expected a map from vertex label to number");
    Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
    for (const auto& [k, v] : values.items()) {
        if (!g.contains(k)) schema("values." + k, "unknown vertex");
        u(g.index_of(k)) = number(v, "values." + k);
    }
    for (Index i = 0; i < g.interior_size(); ++i)
        if (!values.contains(g.label(i))) schema("values." + g.label(i), "missing");
    return u;
}

Certificate certify(const ProblemSpec& spec, const Json& solution, double tol) {
    std::vector<Json> candidates;
    if (solution.is_object() && solution.contains("values")) {
        candidates.push_back(solution.at("values"));
    } else if (solution.is_object() && solution.contains("solutions") && solution.at("solutions").is_array()) {
        for (const auto& s : solution.at("solutions")) {
            if (!s.is_object() || !s.contains("values")) schema("solutions[]", "entry without values");
            candidates.push_back(s.at("values"));
        }
    } else {
        schema("solution", "expected {\"values\": {...}} or a solve report");
    }
    Json out;
    out["tool"] = kToolVersion;
    out["command"] = "certify";
    out["tolerance"] = tol;
    Json list = Json::array();
    bool all_ok = !candidates.empty();
    for (const auto& c : candidates) {
        const Eigen::VectorXd u = parse_vertex_values(spec.graph, c);
        const auto pos = verify_positive(spec, u);
        Json e;
        double res = kNaN;
        bool res_ok = false;
        if (pos.boundary_zero) {
            try {
                res = residual_original(spec, u);
                res_ok = res <= tol;
            } catch (const Error& err) {
                e["residual_error"] = err.what();
            }
            e["gradient_inf"] = gradient_residual(spec, u).lpNorm<Eigen::Infinity>();
        }
        e["residual_original"] = finite_or_null(res);
        e["boundary_zero"] = pos.boundary_zero;
        e["positive"] = pos.strictly_positive && pos.negative_part_zero;
        e["min_interior"] = finite_or_null(pos.min_interior);
        if (!pos.message.empty()) e["message"] = pos.message;
        const bool ok = res_ok && pos.ok();
        e["certified"] = ok;
        all_ok = all_ok && ok;
        list.push_back(e);
    }
    out["results"] = list;
    out["certified"] = all_ok;
    return {out, all_ok};
}

} // namespace plap
