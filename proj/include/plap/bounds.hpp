#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "plap/problem.hpp"

namespace plap {

enum class Inequality { A1, A2, A3, A4, A5, A6, A7 };

const char* to_string(Inequality which);
std::vector<Inequality> all_inequalities();

/// Single-constant items fill `factor` only; a.4–a.6 also fill `offset`
/// (a.4 subtracts it, a.5 and a.6 add it).
struct InequalityConstant {
    double factor;
    double offset = 0;
};

/// Throws DomainError when m is outside the item's range
/// (a.1: m ≥ 1; a.2, a.3, a.5, a.6: m ≥ 2). a.4–a.7 ignore m.
InequalityConstant inequality_bound(Inequality which, const InstanceConstants& c, double m);

struct InequalityCheck {
    double lhs;
    double rhs;
    bool holds;
};

/// Evaluates both sides for u ∈ A. For a.3 and a.4 the inequality is lhs ≥ rhs,
/// otherwise lhs ≤ rhs. `holds` allows a relative slack of 1e-12.
InequalityCheck check_inequality(Inequality which, const ProblemSpec& spec, const Eigen::VectorXd& u,
                                 double m);

struct LambdaThresholds {
    double lambda1;
    double lambda2;
    double gamma0;
    double omega_radius;
    std::optional<double> gamma;
    std::optional<double> lambda3;
    std::optional<double> t0;   ///< at the λ passed to lambda_thresholds, when p⁻ ≠ m₁⁺
};

/// λ₁, λ₂ are NaN without an envelope. Throws GammaTooSmall when gamma ≤ γ₀.
LambdaThresholds lambda_thresholds(const InstanceConstants& c, std::optional<double> gamma = std::nullopt,
                                   std::optional<double> lambda = std::nullopt);

double lambda1(const InstanceConstants& c);
double lambda2(const InstanceConstants& c);
double gamma0(const InstanceConstants& c);
double omega_radius(const InstanceConstants& c);
/// Throws GammaTooSmall.
double lambda3(const InstanceConstants& c, double gamma);
/// Throws DegenerateExponent when p⁻ = m₁⁺.
double t0(const InstanceConstants& c, double lambda);

enum class RegimeTag { DirectAllLambda, DirectBounded, Ekeland, TwoSolutions, TwoSolutionsKKT };

const char* to_string(RegimeTag t);

struct Regime {
    std::vector<RegimeTag> tags;

    bool has(RegimeTag t) const;
    bool empty() const { return tags.empty(); }
};

Regime classify_regime(const InstanceConstants& c, double lambda, std::optional<double> gamma = std::nullopt);

/// Upper bound on J(t e_x) for t ∈ (0, 1], counting every ordered pair at the spike:
/// ω̄⁺(|S̄|-1) t^{p̄⁻}/p̄⁻ + (q⁺/p⁻) t^{p⁻} - λ(φ₁⁻/m₁⁺ + ψ₁⁻) t^{m₁⁺}.
double spike_energy_bound(const InstanceConstants& c, double lambda, double t);

/// Upper bound on J(ξ·1_S) for ξ ≥ 1:
/// |S||∂S| ω̄⁺ ξ^{p̄⁺}/p̄⁻ + (q⁺/p⁻)|S| ξ^{p⁺} - λ|S|(φ₁⁻ ξ^{m₁⁻}/m₁⁺ + ψ₁⁻ ξ).
double hill_energy_bound(const InstanceConstants& c, double lambda, double xi);

/// The shorter pair counts (2|S|+|∂S|-1 and |∂S|+|S|) quoted with the
/// construction. Kept to show where they undercount; not used by the solver.
double spike_energy_bound_short_count(const InstanceConstants& c, double lambda, double t);
double hill_energy_bound_short_count(const InstanceConstants& c, double lambda, double xi);

} // namespace plap
