#include "plap/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "plap/calculus.hpp"
#include "plap/quadrature.hpp"

namespace plap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_length(const Eigen::VectorXd& v, Index n, const char* what) {
    if (v.size() != n) {
        std::ostringstream os;
        os << what << " has " << v.size() << " entries, expected " << n;
        throw Error(ErrorCode::InvariantError, os.str());
    }
}

void require_all(const Eigen::VectorXd& v, bool (*ok)(double), const std::string& what) {
    for (Index i = 0; i < v.size(); ++i)
        if (!ok(v(i))) {
            std::ostringstream os;
            os << what << " fails at interior index " << i << " (value " << v(i) << ")";
            throw Error(ErrorCode::InvariantError, os.str());
        }
}

bool at_least_two(double v) { return v >= 2.0 && std::isfinite(v); }
bool positive(double v) { return v > 0.0 && std::isfinite(v); }

double modulated_power_part(double m, double phi, double t) {
    const double expo = 1.0 - std::exp(-t * t) + m;
    return std::pow(t + 1.0, expo) * (2.0 / std::numbers::pi * std::atan(t) + phi);
}

double modulated_f(double m, double phi, double psi, double t) {
    return modulated_power_part(m, phi, t) + std::abs(std::sin(t)) + psi + 1.0;
}

/// ∫₀ᵗ |sin s| ds: 2 per completed half period plus the partial arch.
double abs_sin_integral(double t) {
    const double k = std::floor(t / std::numbers::pi);
    return 2.0 * k + 1.0 - std::cos(t - k * std::numbers::pi);
}

void check_argument(double t) {
    if (!(t >= 0.0)) {
        std::ostringstream os;
        os << "f is only defined for t >= 0, got " << t;
        throw Error(ErrorCode::NegativeArgument, os.str());
    }
}

} // namespace

ExponentField ExponentField::make(const Graph& g, Eigen::VectorXd values) {
    require_length(values, g.size(), "p");
    for (Index x = 0; x < g.size(); ++x)
        if (!at_least_two(values(x))) {
            std::ostringstream os;
            os << "p(" << g.label(x) << ") = " << values(x) << " < 2 violates p: S̄→[2,∞)";
            throw Error(ErrorCode::InvariantError, os.str());
        }
    ExponentField e;
    const Index ns = g.interior_size();
    e.p_minus = values.head(ns).minCoeff();
    e.p_plus = values.head(ns).maxCoeff();
    e.pbar_minus = values.minCoeff();
    e.pbar_plus = values.maxCoeff();
    e.values = std::move(values);
    return e;
}

Potential Potential::make(const Graph& g, Eigen::VectorXd values) {
    require_length(values, g.interior_size(), "q");
    for (Index x = 0; x < values.size(); ++x)
        if (!positive(values(x))) {
            std::ostringstream os;
            os << "q(" << g.label(x) << ") = " << values(x) << " violates q: S→(0,∞)";
            throw Error(ErrorCode::InvariantError, os.str());
        }
    Potential q;
    q.q_minus = values.minCoeff();
    q.q_plus = values.maxCoeff();
    q.values = std::move(values);
    return q;
}

GrowthEnvelope GrowthEnvelope::make(Eigen::VectorXd m1, Eigen::VectorXd m2, Eigen::VectorXd phi1,
                                    Eigen::VectorXd phi2, Eigen::VectorXd psi1, Eigen::VectorXd psi2) {
    const Index n = m1.size();
    if (n == 0) throw Error(ErrorCode::InvariantError, "empty envelope");
    require_length(m2, n, "m2");
    require_length(phi1, n, "phi1");
    require_length(phi2, n, "phi2");
    require_length(psi1, n, "psi1");
    require_length(psi2, n, "psi2");
    require_all(m1, at_least_two, "m1 >= 2");
    require_all(m2, at_least_two, "m2 >= 2");
    require_all(phi1, positive, "phi1 > 0");
    require_all(phi2, positive, "phi2 > 0");
    require_all(psi1, positive, "psi1 > 0");
    require_all(psi2, positive, "psi2 > 0");
    GrowthEnvelope e;
    e.m1_minus = m1.minCoeff();
    e.m1_plus = m1.maxCoeff();
    e.m2_minus = m2.minCoeff();
    e.m2_plus = m2.maxCoeff();
    e.phi1_minus = phi1.minCoeff();
    e.phi2_plus = phi2.maxCoeff();
    e.psi1_minus = psi1.minCoeff();
    e.psi2_plus = psi2.maxCoeff();
    e.m1 = std::move(m1);
    e.m2 = std::move(m2);
    e.phi1 = std::move(phi1);
    e.phi2 = std::move(phi2);
    e.psi1 = std::move(psi1);
    e.psi2 = std::move(psi2);
    return e;
}

Index Nonlinearity::size() const {
    return std::visit(
        [](const auto& k) -> Index {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, CustomNonlinearity>) return -1;
            else return k.m.size();
        },
        kind);
}

Nonlinearity power_plus(Eigen::VectorXd phi, Eigen::VectorXd m, Eigen::VectorXd psi) {
    const Index n = m.size();
    require_length(phi, n, "phi");
    require_length(psi, n, "psi");
    require_all(phi, [](double v) { return v >= 0.0 && std::isfinite(v); }, "phi >= 0");
    require_all(m, [](double v) { return v >= 1.0 && std::isfinite(v); }, "m >= 1");
    require_all(psi, positive, "psi > 0");
    Nonlinearity out{PowerPlus{phi, m, psi}, std::nullopt};
    if ((phi.array() > 0.0).all() && (m.array() >= 2.0).all())
        out.envelope = GrowthEnvelope::make(m, m, phi, phi, psi, psi);
    return out;
}

Nonlinearity modulated_power(Eigen::VectorXd m, Eigen::VectorXd phi, Eigen::VectorXd psi) {
    const Index n = m.size();
    require_length(phi, n, "phi");
    require_length(psi, n, "psi");
    require_all(m, at_least_two, "m >= 2 (m: S→[2,∞))");
    require_all(phi, positive, "phi > 0");
    require_all(psi, positive, "psi > 0");
    Eigen::VectorXd scale = (Eigen::VectorXd::Constant(n, 2.0).array().pow(m.array()) *
                             (1.0 + phi.array())).matrix();
    Eigen::VectorXd m2 = (m.array() + 2.0).matrix();
    Eigen::VectorXd psi1 = (psi.array() + 1.0).matrix();
    Eigen::VectorXd psi2 = (scale.array() + psi.array() + 2.0).matrix();
    auto env = GrowthEnvelope::make(m, m2, phi, scale, psi1, psi2);
    return Nonlinearity{ModulatedPower{std::move(m), std::move(phi), std::move(psi)}, std::move(env)};
}

Nonlinearity custom_nonlinearity(std::function<double(Index, double)> f,
                                 std::function<double(Index, double)> primitive,
                                 std::optional<GrowthEnvelope> envelope) {
    if (!f) throw Error(ErrorCode::InvariantError, "custom nonlinearity without f");
    return Nonlinearity{CustomNonlinearity{std::move(f), std::move(primitive)}, std::move(envelope)};
}

double eval_f(const Nonlinearity& n, Index x, double t) {
    check_argument(t);
    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PowerPlus>) {
                if (k.m(x) == 1.0) return k.phi(x) + k.psi(x);
                return k.phi(x) * abs_power(t, k.m(x) - 1.0) + k.psi(x);
            } else if constexpr (std::is_same_v<K, ModulatedPower>) {
                return modulated_f(k.m(x), k.phi(x), k.psi(x), t);
            } else {
                return k.f(x, t);
            }
        },
        n.kind);
}

double primitive_F_quadrature(const Nonlinearity& n, Index x, double t) {
    check_argument(t);
    if (t == 0.0) return 0.0;
    return adaptive_simpson([&](double s) { return eval_f(n, x, s); }, 0.0, t);
}

double primitive_F(const Nonlinearity& n, Index x, double t) {
    check_argument(t);
    if (t == 0.0) return 0.0;
    if (const auto* pp = std::get_if<PowerPlus>(&n.kind))
        return pp->phi(x) / pp->m(x) * abs_power(t, pp->m(x)) + pp->psi(x) * t;
    if (const auto* mp = std::get_if<ModulatedPower>(&n.kind)) {
        // Only the smooth power factor needs quadrature; the |sin| kinks would otherwise force deep bisection.
        const double m = mp->m(x), phi = mp->phi(x);
        return adaptive_simpson([&](double s) { return modulated_power_part(m, phi, s); }, 0.0, t) +
               abs_sin_integral(t) + (mp->psi(x) + 1.0) * t;
    }
    if (const auto* c = std::get_if<CustomNonlinearity>(&n.kind); c && c->primitive)
        return c->primitive(x, t);
    return primitive_F_quadrature(n, x, t);
}

std::vector<double> default_envelope_grid() {
    std::vector<double> grid(513);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 10.0 * static_cast<double>(i) / 512.0;
    return grid;
}

EnvelopeReport check_envelope(const Nonlinearity& n) { return check_envelope(n, default_envelope_grid()); }

namespace {

/// F on each grid point; NaN where it cannot be evaluated. An ascending grid lets the
/// modulated kind integrate segment by segment instead of restarting from 0.
std::vector<double> primitive_on_grid(const Nonlinearity& n, Index x, const std::vector<double>& grid) {
    std::vector<double> out(grid.size(), std::numeric_limits<double>::quiet_NaN());
    const auto* mp = std::get_if<ModulatedPower>(&n.kind);
    if (mp && std::is_sorted(grid.begin(), grid.end()) && (grid.empty() || grid.front() >= 0.0)) {
        const double m = mp->m(x), phi = mp->phi(x), psi = mp->psi(x);
        double acc = 0.0, prev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            try {
                acc += adaptive_simpson([&](double s) { return modulated_power_part(m, phi, s); }, prev, grid[i]);
            } catch (const Error&) {
                return out;
            }
            prev = grid[i];
            out[i] = acc + abs_sin_integral(grid[i]) + (psi + 1.0) * grid[i];
        }
        return out;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            out[i] = primitive_F(n, x, grid[i]);
        } catch (const Error&) {
        }
    }
    return out;
}

} // namespace

EnvelopeReport check_envelope(const Nonlinearity& n, const std::vector<double>& grid) {
    EnvelopeReport rep;
    if (!n.envelope) return rep;
    rep.declared = true;
    const auto& e = *n.envelope;

    auto le = [](double a, double b, double rel, double abs) {
        return a <= b + rel * std::abs(b) + abs;
    };

    for (Index x = 0; x < e.m1.size(); ++x) {
        auto lower = [&](double t) { return e.psi1(x) + e.phi1(x) * abs_power(t, e.m1(x) - 1.0); };
        auto upper = [&](double t) { return e.phi2(x) * abs_power(t, e.m2(x) - 1.0) + e.psi2(x); };
        auto F_lower = [&](double t) { return e.psi1(x) * t + e.phi1(x) / e.m1(x) * abs_power(t, e.m1(x)); };
        auto F_upper = [&](double t) { return e.phi2(x) / e.m2(x) * abs_power(t, e.m2(x)) + e.psi2(x) * t; };

        std::vector<double> pts = grid;
        pts.push_back(1e4);
        pts.push_back(2e4);
        for (double t : pts) {
            const double v = eval_f(n, x, t);
            if (!std::isfinite(v)) continue;
            ++rep.points_checked;
            if (!le(lower(t), v, 1e-12, 1e-12)) rep.violations.push_back({x, t, "lower", v, lower(t)});
            if (!le(v, upper(t), 1e-12, 1e-12)) rep.violations.push_back({x, t, "upper", v, upper(t)});
        }
        const std::vector<double> Fs = primitive_on_grid(n, x, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i], F = Fs[i];
            if (std::isnan(F)) continue;
            if (!le(F_lower(t), F, 1e-10, 1e-9)) rep.violations.push_back({x, t, "F_lower", F, F_lower(t)});
            if (!le(F, F_upper(t), 1e-10, 1e-9)) rep.violations.push_back({x, t, "F_upper", F, F_upper(t)});
        }
        const double f1 = eval_f(n, x, 1e4), f2 = eval_f(n, x, 2e4);
        if (std::isfinite(f1) && std::isfinite(f2) && f1 > 0.0) {
            const double rate = std::log2(f2 / f1);
            if (rate > e.m2(x) - 1.0 + 0.05) rep.violations.push_back({x, 1e4, "tail", rate, e.m2(x) - 1.0});
        }
    }
    return rep;
}

ProblemSpec make_problem(Graph g, ExponentField p, Potential q, Nonlinearity f, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::InvariantError, "lambda must be positive");
    require_length(p.values, g.size(), "p");
    require_length(q.values, g.interior_size(), "q");
    const Index nf = f.size();
    if (nf >= 0 && nf != g.interior_size()) throw Error(ErrorCode::InvariantError, "nonlinearity tables do not match |S|");
    if (f.envelope && f.envelope->m1.size() != g.interior_size())
        throw Error(ErrorCode::InvariantError, "envelope tables do not match |S|");
    return ProblemSpec{std::move(g), std::move(p), std::move(q), std::move(f), lambda};
}

InstanceConstants instance_constants(const ProblemSpec& spec) {
    InstanceConstants c;
    auto s = graph_summary(spec.graph);
    c.n_interior = s.n_interior;
    c.n_boundary = s.n_boundary;
    c.n_total = s.n_total;
    c.omega_max = s.omega_max;
    c.p_minus = spec.p.p_minus;
    c.p_plus = spec.p.p_plus;
    c.pbar_minus = spec.p.pbar_minus;
    c.pbar_plus = spec.p.pbar_plus;
    c.q_minus = spec.q.q_minus;
    c.q_plus = spec.q.q_plus;
    c.has_envelope = spec.f.envelope.has_value();
    c.m1_minus = c.m1_plus = c.m2_minus = c.m2_plus = kNaN;
    c.phi1_minus = c.phi2_plus = c.psi1_minus = c.psi2_plus = kNaN;
    if (c.has_envelope) {
        const auto& e = *spec.f.envelope;
        c.m1_minus = e.m1_minus;
        c.m1_plus = e.m1_plus;
        c.m2_minus = e.m2_minus;
        c.m2_plus = e.m2_plus;
        c.phi1_minus = e.phi1_minus;
        c.phi2_plus = e.phi2_plus;
        c.psi1_minus = e.psi1_minus;
        c.psi2_plus = e.psi2_plus;
    }
    return c;
}

} // namespace plap
