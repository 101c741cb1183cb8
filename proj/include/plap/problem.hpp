#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plap/graph.hpp"

namespace plap {

/// p on S̄ with cached extrema: p⁻, p⁺ over S and p̄⁻, p̄⁺ over S̄.
struct ExponentField {
    Eigen::VectorXd values;
    double p_minus = 0, p_plus = 0, pbar_minus = 0, pbar_plus = 0;

    /// Throws InvariantError when some p(x) < 2 or the length is wrong.
    static ExponentField make(const Graph& g, Eigen::VectorXd values);
};

/// q on S, strictly positive.
struct Potential {
    Eigen::VectorXd values;
    double q_minus = 0, q_plus = 0;

    static Potential make(const Graph& g, Eigen::VectorXd values);
};

/// Two-sided power bounds ψ₁ + φ₁ t^{m₁-1} ≤ f(x,t) ≤ φ₂ t^{m₂-1} + ψ₂ on S.
struct GrowthEnvelope {
    Eigen::VectorXd m1, m2, phi1, phi2, psi1, psi2;
    double m1_minus = 0, m1_plus = 0, m2_minus = 0, m2_plus = 0;
    double phi1_minus = 0, phi2_plus = 0, psi1_minus = 0, psi2_plus = 0;

    static GrowthEnvelope make(Eigen::VectorXd m1, Eigen::VectorXd m2, Eigen::VectorXd phi1,
                               Eigen::VectorXd phi2, Eigen::VectorXd psi1, Eigen::VectorXd psi2);
};

/// f = φ t^{m-1} + ψ; primitive in closed form.
struct PowerPlus {
    Eigen::VectorXd phi, m, psi;
};

/// f = (t+1)^{1-exp(-t²)+m} ((2/π) atan t + φ) + |sin t| + ψ + 1.
struct ModulatedPower {
    Eigen::VectorXd m, phi, psi;
};

/// Arbitrary per-vertex f(x, t); the primitive falls back to quadrature when absent.
struct CustomNonlinearity {
    std::function<double(Index, double)> f;
    std::function<double(Index, double)> primitive;
};

struct Nonlinearity {
    std::variant<PowerPlus, ModulatedPower, CustomNonlinearity> kind;
    std::optional<GrowthEnvelope> envelope;

    Index size() const;
};

/// Envelope is the exact one (m₁=m₂=m, φ₁=φ₂=φ, ψ₁=ψ₂=ψ) when φ > 0 and m ≥ 2 everywhere, else none.
Nonlinearity power_plus(Eigen::VectorXd phi, Eigen::VectorXd m, Eigen::VectorXd psi);

/// Requires m ≥ 2, φ > 0, ψ > 0. The derived envelope is
/// m₁ = m, φ₁ = φ, ψ₁ = ψ+1, m₂ = m+2, φ₂ = 2^m(1+φ), ψ₂ = 2^m(1+φ)+ψ+2.
Nonlinearity modulated_power(Eigen::VectorXd m, Eigen::VectorXd phi, Eigen::VectorXd psi);

Nonlinearity custom_nonlinearity(std::function<double(Index, double)> f,
                                 std::function<double(Index, double)> primitive = {},
                                 std::optional<GrowthEnvelope> envelope = std::nullopt);

/// f(x, t) for interior index x and t ≥ 0. Throws NegativeArgument.
double eval_f(const Nonlinearity& n, Index x, double t);

/// F(x, t) = ∫₀ᵗ f(x, s) ds. Throws NegativeArgument, QuadratureFailure.
double primitive_F(const Nonlinearity& n, Index x, double t);

/// Always integrates numerically, whatever the kind.
double primitive_F_quadrature(const Nonlinearity& n, Index x, double t);

struct EnvelopeViolation {
    Index vertex;
    double t;
    std::string bound;   ///< lower, upper, F_lower, F_upper, tail
    double value;
    double limit;
};

struct EnvelopeReport {
    bool declared = false;
    std::size_t points_checked = 0;
    std::vector<EnvelopeViolation> violations;

    bool ok() const { return declared && violations.empty(); }
};

/// 513 points spanning [0, 10].
std::vector<double> default_envelope_grid();

/// Checks (f.1) pointwise and its integrated form on the grid, plus the growth
/// rate of f between t = 1e4 and 2e4 against m₂ - 1.
EnvelopeReport check_envelope(const Nonlinearity& n, const std::vector<double>& grid);
EnvelopeReport check_envelope(const Nonlinearity& n);

struct ProblemSpec {
    Graph graph;
    ExponentField p;
    Potential q;
    Nonlinearity f;
    double lambda = 0;
};

/// Cross-checks the component sizes and λ > 0. Throws InvariantError.
ProblemSpec make_problem(Graph g, ExponentField p, Potential q, Nonlinearity f, double lambda);

struct InstanceConstants {
    Index n_interior = 0, n_boundary = 0, n_total = 0;
    double omega_max = 0;
    double p_minus = 0, p_plus = 0, pbar_minus = 0, pbar_plus = 0;
    double q_minus = 0, q_plus = 0;
    bool has_envelope = false;
    // NaN without an envelope.
    double m1_minus, m1_plus, m2_minus, m2_plus;
    double phi1_minus, phi2_plus, psi1_minus, psi2_plus;
};

InstanceConstants instance_constants(const ProblemSpec& spec);

} // namespace plap
