#pragma once

#include <Eigen/Dense>

#include "plap/problem.hpp"

namespace plap {

struct EnergyBreakdown {
    double dirichlet_term;  ///< ½ Σ_x (1/p(x)) Σ_y |u(y)-u(x)|^{p(x)} ω(x,y)
    double potential_term;  ///< Σ_S (1/p) q |u|^p
    double source_term;     ///< λ Σ_S F(x, u₊) - λ Σ_S f(x,0) u₋
    double total;
};

/// Throws InvariantError unless u has length |S̄| and vanishes on ∂S.
void require_dirichlet(const ProblemSpec& spec, const Eigen::VectorXd& u);

EnergyBreakdown energy(const ProblemSpec& spec, const Eigen::VectorXd& u);
double energy_value(const ProblemSpec& spec, const Eigen::VectorXd& u);

/// Exact gradient of J on A; zero on ∂S. Component x ∈ S:
///   ½ Σ_y ω(x,y) [sp(u(x)-u(y), p(x)) + sp(u(x)-u(y), p(y))] + q sp(u(x), p(x)) - λ f(x, u₊(x)).
/// Agrees with equation_residual wherever p is constant along the edges at x.
Eigen::VectorXd gradient_residual(const ProblemSpec& spec, const Eigen::VectorXd& u);

/// Sum of the magnitudes of the terms in each gradient component. Round-off keeps
/// |∇J(x)| from going much below eps·scale(x), whatever the tolerance asked for.
Eigen::VectorXd gradient_scale(const ProblemSpec& spec, const Eigen::VectorXd& u);

/// -Δ_{p(x)} u(x) + q |u|^{p-2} u - λ f(x, u₊(x)) on S, zero on ∂S.
Eigen::VectorXd equation_residual(const ProblemSpec& spec, const Eigen::VectorXd& u);

/// d/dε J(u + εv) at ε = 0, taken as ⟨gradient_residual(u), v⟩.
double directional_slope(const ProblemSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// max_S |-Δ_{p(x)} u + q |u|^{p-2} u - λ f(x, u)|. Throws NegativeArgument if u < 0 somewhere on S.
double residual_original(const ProblemSpec& spec, const Eigen::VectorXd& u);

/// Interior coordinates: lift pads ∂S with zeros, restrict drops it.
Eigen::VectorXd lift(const ProblemSpec& spec, const Eigen::VectorXd& interior);
Eigen::VectorXd restrict_interior(const ProblemSpec& spec, const Eigen::VectorXd& u);

} // namespace plap
