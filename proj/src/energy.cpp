#include "plap/energy.hpp"

#include <cmath>
#include <sstream>

#include "plap/calculus.hpp"

namespace plap {

void require_dirichlet(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    const auto& g = spec.graph;
    if (u.size() != g.size()) {
        std::ostringstream os;
        os << "function has " << u.size() << " values, graph has " << g.size() << " vertices";
        throw Error(ErrorCode::InvariantError, os.str());
    }
    for (Index x = g.interior_size(); x < g.size(); ++x)
        if (u(x) != 0.0) throw Error(ErrorCode::InvariantError, "u(" + g.label(x) + ") != 0 on the boundary");
}

EnergyBreakdown energy(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    require_dirichlet(spec, u);
    const auto& g = spec.graph;
    const auto& p = spec.p.values;
    EnergyBreakdown e{0, 0, 0, 0};
    for (Index x = 0; x < g.size(); ++x) {
        double row = 0;
        for (Index y : g.neighbors(x)) row += abs_power(u(y) - u(x), p(x)) * g.weight(x, y);
        e.dirichlet_term += row / p(x);
    }
    e.dirichlet_term *= 0.5;
    for (Index x = 0; x < g.interior_size(); ++x) {
        e.potential_term += spec.q.values(x) * abs_power(u(x), p(x)) / p(x);
        // F extended by f(x,0)·t below zero, so the source gradient is f(x, u₊) everywhere.
        e.source_term += u(x) >= 0.0 ? primitive_F(spec.f, x, u(x)) : eval_f(spec.f, x, 0.0) * u(x);
    }
    e.source_term *= spec.lambda;
    e.total = e.dirichlet_term + e.potential_term - e.source_term;
    return e;
}

double energy_value(const ProblemSpec& spec, const Eigen::VectorXd& u) { return energy(spec, u).total; }

Eigen::VectorXd gradient_residual(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    require_dirichlet(spec, u);
    const auto& g = spec.graph;
    const auto& p = spec.p.values;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(g.size());
    for (Index x = 0; x < g.interior_size(); ++x) {
        double acc = 0;
        for (Index y : g.neighbors(x)) {
            const double d = u(x) - u(y);
            acc += g.weight(x, y) * (signed_power(d, p(x)) + signed_power(d, p(y)));
        }
        r(x) = 0.5 * acc + spec.q.values(x) * signed_power(u(x), p(x)) -
               spec.lambda * eval_f(spec.f, x, std::max(u(x), 0.0));
    }
    return r;
}

Eigen::VectorXd gradient_scale(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    require_dirichlet(spec, u);
    const auto& g = spec.graph;
    const auto& p = spec.p.values;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(g.size());
    for (Index x = 0; x < g.interior_size(); ++x) {
        double acc = 0;
        for (Index y : g.neighbors(x)) {
            const double d = u(x) - u(y);
            acc += g.weight(x, y) * (abs_power(d, p(x) - 1) + abs_power(d, p(y) - 1));
        }
        r(x) = 0.5 * acc + spec.q.values(x) * abs_power(u(x), p(x) - 1) +
               spec.lambda * std::abs(eval_f(spec.f, x, std::max(u(x), 0.0)));
    }
    return r;
}

Eigen::VectorXd equation_residual(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    require_dirichlet(spec, u);
    const auto& g = spec.graph;
    const auto& p = spec.p.values;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(g.size());
    for (Index x = 0; x < g.interior_size(); ++x)
        r(x) = -p_laplacian(g, p, u, x) + spec.q.values(x) * signed_power(u(x), p(x)) -
               spec.lambda * eval_f(spec.f, x, std::max(u(x), 0.0));
    return r;
}

double directional_slope(const ProblemSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    require_dirichlet(spec, v);
    return gradient_residual(spec, u).dot(v);
}

double residual_original(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    require_dirichlet(spec, u);
    for (Index x = 0; x < spec.graph.interior_size(); ++x)
        if (u(x) < 0.0) {
            std::ostringstream os;
            os << "u(" << spec.graph.label(x) << ") = " << u(x) << " is negative";
            throw Error(ErrorCode::NegativeArgument, os.str());
        }
    return equation_residual(spec, u).lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd lift(const ProblemSpec& spec, const Eigen::VectorXd& interior) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(spec.graph.size());
    u.head(spec.graph.interior_size()) = interior;
    return u;
}

Eigen::VectorXd restrict_interior(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    return u.head(spec.graph.interior_size());
}

} // namespace plap
