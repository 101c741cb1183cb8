#include "plap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plap/calculus.hpp"
#include "plap/energy.hpp"

namespace plap {

namespace {

using LD = long double;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_m(Inequality which, double m, double lo) {
    if (!(m >= lo)) {
        std::ostringstream os;
        os << to_string(which) << " needs m >= " << lo << ", got " << m;
        throw Error(ErrorCode::DomainError, os.str());
    }
}

/// 2^{-e/2} |∂S|^{e/2} |S̄|^{1-e}, the a.3 / a.4 constant.
LD lower_power_constant(const InstanceConstants& c, LD e) {
    return std::pow(2.0L, -e / 2) * std::pow(LD(c.n_boundary), e / 2) * std::pow(LD(c.n_total), 1 - e);
}

} // namespace

const char* to_string(Inequality which) {
    switch (which) {
    case Inequality::A1: return "a.1";
    case Inequality::A2: return "a.2";
    case Inequality::A3: return "a.3";
    case Inequality::A4: return "a.4";
    case Inequality::A5: return "a.5";
    case Inequality::A6: return "a.6";
    case Inequality::A7: return "a.7";
    }
    return "?";
}

std::vector<Inequality> all_inequalities() {
    return {Inequality::A1, Inequality::A2, Inequality::A3, Inequality::A4,
            Inequality::A5, Inequality::A6, Inequality::A7};
}

InequalityConstant inequality_bound(Inequality which, const InstanceConstants& c, double m) {
    const LD S = LD(c.n_interior), Sbar = LD(c.n_total);
    switch (which) {
    case Inequality::A1:
        require_m(which, m, 1);
        return {double(S)};
    case Inequality::A2:
        require_m(which, m, 2);
        return {double(std::pow(2.0L, LD(m)) * Sbar * S)};
    case Inequality::A3:
        require_m(which, m, 2);
        return {double(lower_power_constant(c, m))};
    case Inequality::A4:
        return {double(lower_power_constant(c, c.p_minus)), double(S)};
    case Inequality::A5:
        require_m(which, m, 2);
        return {double(LD(c.omega_max) * std::pow(2.0L, LD(c.pbar_plus)) * Sbar * S),
                double(LD(c.omega_max) * Sbar * Sbar)};
    case Inequality::A6:
        require_m(which, m, 2);
        return {double(S), double(S)};
    case Inequality::A7:
        return {double(std::sqrt(Sbar))};
    }
    throw Error(ErrorCode::DomainError, "unknown inequality");
}

InequalityCheck check_inequality(Inequality which, const ProblemSpec& spec, const Eigen::VectorXd& u,
                                 double m) {
    require_dirichlet(spec, u);
    const auto c = instance_constants(spec);
    const auto k = inequality_bound(which, c, m);
    const auto& g = spec.graph;
    const auto& p = spec.p.values;
    const Index ns = g.interior_size();
    const double nrm = u.norm();

    double lhs = 0, rhs = 0;
    bool at_least = false;
    switch (which) {
    case Inequality::A1:
    case Inequality::A3:
        for (Index x = 0; x < ns; ++x) lhs += abs_power(u(x), m);
        rhs = k.factor * std::pow(nrm, m);
        at_least = which == Inequality::A3;
        break;
    case Inequality::A2:
        for (Index x = 0; x < g.size(); ++x)
            for (Index y = 0; y < g.size(); ++y) lhs += abs_power(u(y) - u(x), m);
        rhs = k.factor * std::pow(nrm, m);
        break;
    case Inequality::A4:
        for (Index x = 0; x < ns; ++x) lhs += abs_power(u(x), p(x));
        rhs = k.factor * std::pow(nrm, c.p_minus) - k.offset;
        at_least = true;
        break;
    case Inequality::A5:
        for (Index x = 0; x < g.size(); ++x)
            for (Index y : g.neighbors(x)) lhs += abs_power(u(y) - u(x), p(x)) * g.weight(x, y);
        rhs = k.factor * std::pow(nrm, c.pbar_plus) + k.offset;
        break;
    case Inequality::A6:
        for (Index x = 0; x < ns; ++x) lhs += abs_power(u(x), p(x));
        rhs = k.factor * std::pow(nrm, c.p_plus) + k.offset;
        break;
    case Inequality::A7:
        lhs = ns > 0 ? u.head(ns).cwiseAbs().maxCoeff() : 0.0;
        rhs = k.factor * nrm;
        break;
    }
    const double slack = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    const bool holds = at_least ? lhs >= rhs - slack : lhs <= rhs + slack;
    return {lhs, rhs, holds};
}

double lambda1(const InstanceConstants& c) {
    if (!c.has_envelope) return kNaN;
    const LD Sbar = c.n_total;
    const LD num = LD(c.q_minus) / LD(c.p_plus) * lower_power_constant(c, c.p_minus);
    const LD den = (LD(c.phi2_plus) / LD(c.m2_minus) + LD(c.psi2_plus) * std::sqrt(Sbar)) * LD(c.n_interior);
    return double(num / den);
}

double lambda2(const InstanceConstants& c) {
    if (!c.has_envelope) return kNaN;
    const LD Sbar = c.n_total, pp = c.p_plus;
    const LD num = LD(c.q_minus) / pp * lower_power_constant(c, pp) * std::pow(Sbar, -pp / 2);
    const LD den = (LD(c.phi2_plus) / LD(c.m2_minus) * std::pow(Sbar, -LD(c.m2_minus) / 2) + LD(c.psi2_plus)) *
                   LD(c.n_interior);
    return double(num / den);
}

double gamma0(const InstanceConstants& c) {
    return double(std::sqrt(2.0L) * std::sqrt(LD(c.n_boundary)) * LD(c.n_total));
}

double omega_radius(const InstanceConstants& c) { return double(1.0L / std::sqrt(LD(c.n_total))); }

double lambda3(const InstanceConstants& c, double gamma) {
    const double g0 = gamma0(c);
    if (!(gamma > g0)) {
        std::ostringstream os;
        os << "gamma = " << gamma << " must exceed gamma0 = " << g0;
        throw Error(ErrorCode::GammaTooSmall, os.str());
    }
    if (!c.has_envelope) return kNaN;
    const LD G = gamma, qm = c.q_minus, S = c.n_interior;
    const LD num = qm * lower_power_constant(c, c.p_minus) * std::pow(G, LD(c.p_minus)) - qm * S;
    const LD den = (LD(c.phi2_plus) * std::pow(G, LD(c.m2_plus)) + LD(c.phi2_plus) +
                    LD(c.psi2_plus) * std::sqrt(LD(c.n_total)) * G) *
                   S;
    return double(num / den);
}

double t0(const InstanceConstants& c, double lambda) {
    if (!c.has_envelope) return kNaN;
    if (c.p_minus == c.m1_plus) throw Error(ErrorCode::DegenerateExponent, "t0 needs p- != m1+");
    const LD num = 2 * LD(lambda) * (LD(c.phi1_minus) / LD(c.m1_plus) + LD(c.psi1_minus)) * LD(c.p_minus);
    const LD den = LD(c.omega_max) * (2 * LD(c.n_interior) + LD(c.n_boundary) - 1) + 2 * LD(c.q_plus);
    const LD v = std::pow(num / den, 1 / (LD(c.p_minus) - LD(c.m1_plus)));
    return double(std::min(1.0L, v));
}

LambdaThresholds lambda_thresholds(const InstanceConstants& c, std::optional<double> gamma,
                                   std::optional<double> lambda) {
    LambdaThresholds t;
    t.lambda1 = lambda1(c);
    t.lambda2 = lambda2(c);
    t.gamma0 = gamma0(c);
    t.omega_radius = omega_radius(c);
    if (gamma) {
        t.gamma = gamma;
        t.lambda3 = lambda3(c, *gamma);
    }
    if (lambda && c.has_envelope && c.p_minus != c.m1_plus) t.t0 = t0(c, *lambda);
    return t;
}

const char* to_string(RegimeTag t) {
    switch (t) {
    case RegimeTag::DirectAllLambda: return "DirectAllLambda";
    case RegimeTag::DirectBounded: return "DirectBounded";
    case RegimeTag::Ekeland: return "Ekeland";
    case RegimeTag::TwoSolutions: return "TwoSolutions";
    case RegimeTag::TwoSolutionsKKT: return "TwoSolutionsKKT";
    }
    return "?";
}

bool Regime::has(RegimeTag t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }

Regime classify_regime(const InstanceConstants& c, double lambda, std::optional<double> gamma) {
    Regime r;
    if (!c.has_envelope) return r;
    const double l2 = lambda2(c);
    if (c.m2_plus < c.p_minus) r.tags.push_back(RegimeTag::DirectAllLambda);
    if (c.m2_plus == c.p_minus && lambda < lambda1(c)) r.tags.push_back(RegimeTag::DirectBounded);
    if (c.p_minus != c.m1_plus && lambda < l2) r.tags.push_back(RegimeTag::Ekeland);
    if (c.m1_minus > c.pbar_plus && lambda < l2) r.tags.push_back(RegimeTag::TwoSolutions);
    if (c.m1_minus > c.pbar_plus && gamma && *gamma > gamma0(c) && lambda < lambda3(c, *gamma))
        r.tags.push_back(RegimeTag::TwoSolutionsKKT);
    return r;
}

double spike_energy_bound(const InstanceConstants& c, double lambda, double t) {
    return c.omega_max * double(c.n_total - 1) * std::pow(t, c.pbar_minus) / c.pbar_minus +
           c.q_plus / c.p_minus * std::pow(t, c.p_minus) -
           lambda * (c.phi1_minus / c.m1_plus + c.psi1_minus) * std::pow(t, c.m1_plus);
}

double hill_energy_bound(const InstanceConstants& c, double lambda, double xi) {
    const double S = double(c.n_interior);
    return S * double(c.n_boundary) * c.omega_max * std::pow(xi, c.pbar_plus) / c.pbar_minus +
           c.q_plus / c.p_minus * S * std::pow(xi, c.p_plus) -
           lambda * S * (c.phi1_minus * std::pow(xi, c.m1_minus) / c.m1_plus + c.psi1_minus * xi);
}

double spike_energy_bound_short_count(const InstanceConstants& c, double lambda, double t) {
    return c.omega_max * double(2 * c.n_interior + c.n_boundary - 1) * std::pow(t, c.p_minus) /
               (2 * c.p_minus) +
           c.q_plus / c.p_minus * std::pow(t, c.p_minus) -
           lambda * (c.phi1_minus / c.m1_plus + c.psi1_minus) * std::pow(t, c.m1_plus);
}

double hill_energy_bound_short_count(const InstanceConstants& c, double lambda, double xi) {
    const double S = double(c.n_interior);
    return double(c.n_boundary + c.n_interior) * std::pow(xi, c.pbar_plus) * c.omega_max / (2 * c.pbar_minus) +
           c.q_plus / c.p_minus * S * std::pow(xi, c.p_plus) -
           lambda * S * (c.phi1_minus * std::pow(xi, c.m1_minus) / c.m1_plus + c.psi1_minus * xi);
}

} // namespace plap
