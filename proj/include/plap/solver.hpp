#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plap/bounds.hpp"
#include "plap/problem.hpp"

namespace plap {

struct ArmijoOptions {
    double c = 1e-4;
    double backtrack = 0.5;
    double init_step = 1.0;
};

struct SolverOptions {
    double grad_tol = 1e-9;  ///< ∞-norm
    long max_iter = 200000;
    ArmijoOptions armijo;
    int restarts = 16;
    std::uint64_t rng_seed = 0;
    int path_points = 21;
    /// Newton refinement on the analytic gradient once Armijo stalls.
    bool polish = true;
};

struct NoConstraint {};
struct Ball {
    double r;
};
struct Annulus {
    double inner;
    double outer;
};
struct Sphere {
    double r;
};
using Constraint = std::variant<NoConstraint, Ball, Annulus, Sphere>;

enum class PointKind { Minimizer, Saddle, Unclassified };
enum class DescentStatus { Converged, MaxIterExceeded, Stalled, Diverged };

const char* to_string(PointKind k);
const char* to_string(DescentStatus s);

struct CriticalPoint {
    Eigen::VectorXd u;            ///< on S̄, zero on ∂S
    double value = 0;             ///< J(u)
    double residual_inf = 0;      ///< stationarity measure of the constraint it was computed under
    double gradient_inf = 0;      ///< ‖∇J(u)‖∞
    PointKind kind = PointKind::Unclassified;
    bool positive_on_S = false;
    DescentStatus status = DescentStatus::Converged;
    long iterations = 0;
    std::string origin;
    double residual_original = 0; ///< NaN when u is negative somewhere on S
    double norm = 0;
};

/// Projected-gradient descent with Armijo backtracking (Barzilai–Borwein trial step).
/// Throws InfeasibleStart. Exhausting max_iter is reported via status, not thrown.
CriticalPoint descend(const ProblemSpec& spec, const Eigen::VectorXd& u0, const Constraint& constraint,
                      const SolverOptions& opts = {});

struct SphereMin {
    double value;
    Eigen::VectorXd argmin;
};

/// Best of several sphere-constrained descents; an upper estimate of min_{‖u‖=r} J.
SphereMin min_on_sphere(const ProblemSpec& spec, double r, const SolverOptions& opts = {});

struct SpikePoint {
    Eigen::VectorXd u;
    Index vertex;
    double height;
    double value;
    double bound;   ///< spike_energy_bound at this height
    int halvings;   ///< extra halvings below min(t₀, radius)/2
};

/// Single spike below t₀ and inside Ω with J < 0. Throws ConstructionFailed, DegenerateExponent.
SpikePoint spike_point(const ProblemSpec& spec);

/// ξ·1_S with J < barrier and norm > radius, ξ = 1, 2, 4, … up to 2⁶⁰. Throws ScanExhausted.
Eigen::VectorXd hill_point(const ProblemSpec& spec, double barrier, double radius);

/// Path deformation between u0 and u1. Throws DegeneratePath, MaxIterExceeded.
CriticalPoint mountain_pass(const ProblemSpec& spec, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                            const SolverOptions& opts = {});

struct KKTMultipliers {
    double sigma;
    double theta;
    double kappa = 1.0;
    double stationarity;   ///< ‖g + (σ-θ)u‖∞
};

/// Throws InfeasiblePoint unless ζ ≤ ‖u‖ ≤ γ (up to 1e-8).
KKTMultipliers kkt_multipliers(const ProblemSpec& spec, const Eigen::VectorXd& u, double zeta, double gamma);
KKTMultipliers kkt_multipliers_from_gradient(const Eigen::VectorXd& g, const Eigen::VectorXd& u, double zeta,
                                             double gamma);

struct PositivityReport {
    bool boundary_zero;
    bool strictly_positive;
    bool negative_part_zero;
    double min_interior;
    std::string message;

    bool ok() const { return boundary_zero && strictly_positive && negative_part_zero; }
};

PositivityReport verify_positive(const ProblemSpec& spec, const Eigen::VectorXd& u);

struct SolveReport {
    Regime regime;
    LambdaThresholds thresholds;
    std::vector<CriticalPoint> solutions;   ///< accepted: ‖∇J‖∞ ≤ grad_tol
    std::vector<CriticalPoint> rejected;    ///< best candidates that missed the tolerance
    std::optional<KKTMultipliers> kkt;
    std::optional<double> sphere_min_estimate;
    std::vector<std::string> notes;
    std::uint64_t seed = 0;
};

SolveReport solve(const ProblemSpec& spec, const SolverOptions& opts = {},
                  std::optional<double> gamma = std::nullopt);

} // namespace plap
