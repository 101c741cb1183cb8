#include "plap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "plap/energy.hpp"

namespace plap {

namespace {

using Eigen::VectorXd;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergence = 1e10;

/// J and ∇J in interior coordinates.
struct Objective {
    const ProblemSpec& spec;

    /// NaN when J cannot be evaluated (overflowing primitive, non-finite powers).
    double value(const VectorXd& x) const {
        try {
            const double v = energy_value(spec, lift(spec, x));
            return std::isfinite(v) ? v : kNaN;
        } catch (const Error&) {
            return kNaN;
        }
    }

    VectorXd grad(const VectorXd& x) const {
        return restrict_interior(spec, gradient_residual(spec, lift(spec, x)));
    }
};

VectorXd constant_direction(Index n) { return VectorXd::Constant(n, 1.0 / std::sqrt(double(n))); }

VectorXd project(const Constraint& c, const VectorXd& x) {
    return std::visit(
        [&](const auto& k) -> VectorXd {
            using K = std::decay_t<decltype(k)>;
            const double n = x.norm();
            if constexpr (std::is_same_v<K, NoConstraint>) {
                return x;
            } else if constexpr (std::is_same_v<K, Ball>) {
                return n > k.r ? VectorXd(x * (k.r / n)) : x;
            } else if constexpr (std::is_same_v<K, Annulus>) {
                if (n == 0.0) return constant_direction(x.size()) * k.inner;
                if (n < k.inner) return x * (k.inner / n);
                if (n > k.outer) return x * (k.outer / n);
                return x;
            } else {
                if (n == 0.0) return constant_direction(x.size()) * k.r;
                return x * (k.r / n);
            }
        },
        c);
}

bool feasible(const Constraint& c, const VectorXd& x, double rel) {
    const double n = x.norm();
    return std::visit(
        [&](const auto& k) -> bool {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, NoConstraint>) return x.allFinite();
            else if constexpr (std::is_same_v<K, Ball>) return n <= k.r * (1 + rel);
            else if constexpr (std::is_same_v<K, Annulus>)
                return n >= k.inner * (1 - rel) && n <= k.outer * (1 + rel);
            else return std::abs(n - k.r) <= k.r * rel;
        },
        c);
}

/// True when x sits strictly inside the feasible set, where Newton steps are unconstrained.
bool strictly_inside(const Constraint& c, const VectorXd& x) {
    const double n = x.norm();
    return std::visit(
        [&](const auto& k) -> bool {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, NoConstraint>) return true;
            else if constexpr (std::is_same_v<K, Ball>) return n < k.r * (1 - 1e-9);
            else if constexpr (std::is_same_v<K, Annulus>)
                return n > k.inner * (1 + 1e-9) && n < k.outer * (1 - 1e-9);
            else return false;
        },
        c);
}

VectorXd tangential(const VectorXd& x, const VectorXd& g) { return g - (g.dot(x) / x.squaredNorm()) * x; }

double stationarity(const Constraint& c, const VectorXd& x, const VectorXd& g) {
    if (std::holds_alternative<NoConstraint>(c)) return g.lpNorm<Eigen::Infinity>();
    if (std::holds_alternative<Sphere>(c)) return tangential(x, g).lpNorm<Eigen::Infinity>();
    return (project(c, x - g) - x).lpNorm<Eigen::Infinity>();
}

/// Damped Newton on ∇J = 0 with a central-difference Jacobian of the analytic gradient.
std::optional<VectorXd> newton_polish(const Objective& obj, VectorXd x, double tol,
                                      const std::function<bool(const VectorXd&)>& admissible) {
    const Index n = x.size();
    for (int it = 0; it < 50; ++it) {
        const VectorXd g = obj.grad(x);
        const double gn = g.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(gn)) return std::nullopt;
        if (gn <= tol) return x;
        Eigen::MatrixXd H(n, n);
        for (Index i = 0; i < n; ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
            VectorXd xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            H.col(i) = (obj.grad(xp) - obj.grad(xm)) / (2 * h);
        }
        H = 0.5 * (H + H.transpose()).eval();
        VectorXd d = H.fullPivLu().solve(-g);
        if (!d.allFinite()) d = H.colPivHouseholderQr().solve(-g);
        if (!d.allFinite()) return std::nullopt;
        double a = 1.0;
        bool moved = false;
        while (a > 1e-10) {
            const VectorXd xn = x + a * d;
            if (admissible(xn)) {
                const double gnn = obj.grad(xn).lpNorm<Eigen::Infinity>();
                if (std::isfinite(gnn) && gnn < gn) {
                    x = xn;
                    moved = true;
                    break;
                }
            }
            a *= 0.5;
        }
        if (!moved) return std::nullopt;
    }
    return obj.grad(x).lpNorm<Eigen::Infinity>() <= tol ? std::optional<VectorXd>(x) : std::nullopt;
}

CriticalPoint make_point(const ProblemSpec& spec, const Objective& obj, const VectorXd& x, double residual,
                         PointKind kind, DescentStatus status, long iterations, std::string origin) {
    CriticalPoint cp;
    cp.u = lift(spec, x);
    cp.value = obj.value(x);
    cp.residual_inf = residual;
    cp.gradient_inf = obj.grad(x).lpNorm<Eigen::Infinity>();
    cp.kind = kind;
    cp.positive_on_S = x.size() > 0 && x.minCoeff() > 0.0;
    cp.status = status;
    cp.iterations = iterations;
    cp.origin = std::move(origin);
    cp.norm = x.norm();
    try {
        cp.residual_original = residual_original(spec, cp.u);
    } catch (const Error&) {
        cp.residual_original = kNaN;
    }
    return cp;
}

/// Smallest gradient residual double precision can certify at x.
double round_off_floor(const ProblemSpec& spec, const VectorXd& x) {
    return 8 * std::numeric_limits<double>::epsilon() *
           gradient_scale(spec, lift(spec, x)).lpNorm<Eigen::Infinity>();
}

/// Golden-section maximum of J on the segment a→b.
std::pair<VectorXd, double> segment_max(const Objective& obj, const VectorXd& a, const VectorXd& b) {
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double lo = 0, hi = 1;
    auto at = [&](double s) -> VectorXd { return a + s * (b - a); };
    auto val = [&](double s) {
        const double v = obj.value(at(s));
        return std::isfinite(v) ? v : -kInf;
    };
    double s1 = hi - inv_phi * (hi - lo), s2 = lo + inv_phi * (hi - lo);
    double f1 = val(s1), f2 = val(s2);
    for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
        if (f1 >= f2) {
            hi = s2;
            s2 = s1;
            f2 = f1;
            s1 = hi - inv_phi * (hi - lo);
            f1 = val(s1);
        } else {
            lo = s1;
            s1 = s2;
            f1 = f2;
            s2 = lo + inv_phi * (hi - lo);
            f2 = val(s2);
        }
    }
    const double s = 0.5 * (lo + hi);
    return {at(s), val(s)};
}

std::vector<VectorXd> reparametrize(const std::vector<VectorXd>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> arc(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) arc[i] = arc[i - 1] + (nodes[i] - nodes[i - 1]).norm();
    if (arc.back() == 0.0) return nodes;
    std::vector<VectorXd> out(n);
    out.front() = nodes.front();
    out.back() = nodes.back();
    std::size_t seg = 1;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double target = arc.back() * double(i) / double(n - 1);
        while (seg + 1 < n && arc[seg] < target) ++seg;
        const double len = arc[seg] - arc[seg - 1];
        const double s = len > 0 ? (target - arc[seg - 1]) / len : 0.0;
        out[i] = nodes[seg - 1] + s * (nodes[seg] - nodes[seg - 1]);
    }
    return out;
}

bool same_point(const VectorXd& a, const VectorXd& b) {
    const double scale = 1.0 + std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
    return (a - b).lpNorm<Eigen::Infinity>() <= 1e-7 * scale;
}

} // namespace

const char* to_string(PointKind k) {
    switch (k) {
    case PointKind::Minimizer: return "Minimizer";
    case PointKind::Saddle: return "Saddle";
    case PointKind::Unclassified: return "Unclassified";
    }
    return "?";
}

const char* to_string(DescentStatus s) {
    switch (s) {
    case DescentStatus::Converged: return "Converged";
    case DescentStatus::MaxIterExceeded: return "MaxIterExceeded";
    case DescentStatus::Stalled: return "Stalled";
    case DescentStatus::Diverged: return "Diverged";
    }
    return "?";
}

CriticalPoint descend(const ProblemSpec& spec, const Eigen::VectorXd& u0, const Constraint& constraint,
                      const SolverOptions& opts) {
    require_dirichlet(spec, u0);
    const Objective obj{spec};
    VectorXd x = restrict_interior(spec, u0);
    if (!feasible(constraint, x, 1e-10)) throw Error(ErrorCode::InfeasibleStart, "start violates the constraint");
    x = project(constraint, x);
    double J = obj.value(x);
    if (!std::isfinite(J)) throw Error(ErrorCode::InfeasibleStart, "J is not finite at the start");
    VectorXd g = obj.grad(x);

    const bool on_sphere = std::holds_alternative<Sphere>(constraint);
    const auto& arm = opts.armijo;
    double alpha = arm.init_step;
    DescentStatus status = DescentStatus::MaxIterExceeded;
    long it = 0;

    auto admissible = [&](const VectorXd& z) { return strictly_inside(constraint, z); };
    auto try_polish = [&]() -> bool {
        if (!opts.polish || !strictly_inside(constraint, x)) return false;
        auto z = newton_polish(obj, x, opts.grad_tol, admissible);
        if (!z) return false;
        const double Jz = obj.value(*z);
        if (!std::isfinite(Jz) || Jz > J + 1e-10 * (1 + std::abs(J))) return false;
        if ((*z - x).norm() > 1e-3 * (1 + x.norm())) return false;
        x = *z;
        J = Jz;
        g = obj.grad(x);
        return true;
    };

    for (; it < opts.max_iter; ++it) {
        const double r = stationarity(constraint, x, g);
        if (r <= opts.grad_tol) {
            status = DescentStatus::Converged;
            break;
        }
        if (it > 0 && it % 200 == 0 && r <= 1e-3 && try_polish()) {
            status = DescentStatus::Converged;
            break;
        }
        const VectorXd d = on_sphere ? tangential(x, g) : g;
        double a = alpha;
        bool accepted = false;
        VectorXd xn;
        double Jn = kNaN;
        for (int bt = 0; bt < 200; ++bt, a *= arm.backtrack) {
            xn = project(constraint, x - a * d);
            const double step = (xn - x).lpNorm<Eigen::Infinity>();
            if (step <= 1e-16 * (1 + x.lpNorm<Eigen::Infinity>())) break;
            const double dec = g.dot(xn - x);
            if (!(dec < 0)) continue;
            Jn = obj.value(xn);
            if (std::isfinite(Jn) && Jn <= J + arm.c * dec) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            status = DescentStatus::Stalled;
            break;
        }
        const VectorXd gn = obj.grad(xn);
        const VectorXd s = xn - x, y = gn - g;
        const double sy = s.dot(y);
        alpha = sy > 0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : std::min(4 * a, 1e12);
        x = xn;
        J = Jn;
        g = gn;
        if (x.lpNorm<Eigen::Infinity>() > kDivergence) {
            status = DescentStatus::Diverged;
            break;
        }
    }
    if ((status == DescentStatus::Stalled || status == DescentStatus::MaxIterExceeded) && try_polish())
        status = DescentStatus::Converged;
    if (status == DescentStatus::Stalled && stationarity(constraint, x, g) <= opts.grad_tol)
        status = DescentStatus::Converged;
    return make_point(spec, obj, x, stationarity(constraint, x, g), PointKind::Minimizer, status, it, "descent");
}

SphereMin min_on_sphere(const ProblemSpec& spec, double r, const SolverOptions& opts) {
    if (!(r > 0)) throw Error(ErrorCode::DomainError, "sphere radius must be positive");
    const Index ns = spec.graph.interior_size();
    SolverOptions local = opts;
    local.grad_tol = std::max(opts.grad_tol, 1e-8);
    local.max_iter = std::min(opts.max_iter, 5000L);
    local.polish = false;

    std::vector<VectorXd> dirs{constant_direction(ns), -constant_direction(ns)};
    std::mt19937_64 rng(opts.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal;
    for (int k = 0; k < opts.restarts && ns > 1; ++k) {
        VectorXd d(ns);
        for (Index i = 0; i < ns; ++i) d(i) = normal(rng);
        if (d.norm() > 0) dirs.push_back(d / d.norm());
    }
    SphereMin best{kInf, VectorXd()};
    for (const auto& d : dirs) {
        const auto cp = descend(spec, lift(spec, r * d), Sphere{r}, local);
        if (std::isfinite(cp.value) && cp.value < best.value) best = {cp.value, cp.u};
    }
    if (best.argmin.size() == 0) throw Error(ErrorCode::ConstructionFailed, "J is not finite on the sphere");
    return best;
}

SpikePoint spike_point(const ProblemSpec& spec) {
    const auto c = instance_constants(spec);
    if (!c.has_envelope) throw Error(ErrorCode::ConstructionFailed, "no growth envelope declared");
    const double t = t0(c, spec.lambda);
    const double R = omega_radius(c);
    double h = std::min(t, R) / 2;
    const Objective obj{spec};
    const Index ns = spec.graph.interior_size();
    std::ostringstream trail;
    for (int halvings = 0; halvings <= 60; ++halvings, h /= 2) {
        Index best = -1;
        double bestJ = kInf;
        for (Index x = 0; x < ns; ++x) {
            VectorXd v = VectorXd::Zero(ns);
            v(x) = h;
            const double J = obj.value(v);
            if (std::isfinite(J) && J < bestJ) {
                bestJ = J;
                best = x;
            }
        }
        if (best >= 0 && bestJ < 0) {
            VectorXd v = VectorXd::Zero(ns);
            v(best) = h;
            return {lift(spec, v), best, h, bestJ, spike_energy_bound(c, spec.lambda, h), halvings};
        }
        if (halvings == 0) trail << "J = " << bestJ << " at height " << h;
    }
    throw Error(ErrorCode::ConstructionFailed,
                trail.str() + "; bound " + std::to_string(spike_energy_bound(c, spec.lambda, std::min(t, R) / 2)) +
                    "; no negative spike after 60 halvings");
}

Eigen::VectorXd hill_point(const ProblemSpec& spec, double barrier, double radius) {
    const Objective obj{spec};
    const Index ns = spec.graph.interior_size();
    double xi = 1.0;
    for (int k = 0; k <= 60; ++k, xi *= 2) {
        const VectorXd v = VectorXd::Constant(ns, xi);
        const double J = obj.value(v);
        if (!std::isfinite(J)) break;
        if (J < barrier && v.norm() > radius) return lift(spec, v);
    }
    std::ostringstream os;
    os << "no ξ·1_S with J < " << barrier << " and norm > " << radius << " up to ξ = " << xi;
    throw Error(ErrorCode::ScanExhausted, os.str());
}

CriticalPoint mountain_pass(const ProblemSpec& spec, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                            const SolverOptions& opts) {
    require_dirichlet(spec, u0);
    require_dirichlet(spec, u1);
    const Objective obj{spec};
    const VectorXd a = restrict_interior(spec, u0), b = restrict_interior(spec, u1);
    const int n = std::max(opts.path_points, 3);
    std::vector<VectorXd> nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) nodes[std::size_t(i)] = a + (double(i) / (n - 1)) * (b - a);
    std::vector<double> J(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) J[i] = obj.value(nodes[i]);
    const double J_end = std::max(J.front(), J.back());
    const double margin = 10 * opts.grad_tol;
    const auto NI = nodes.size() - 1;

    auto acceptable = [&](const VectorXd& z, double Jz) {
        return std::isfinite(Jz) && Jz > J_end + margin && !same_point(z, a) && !same_point(z, b);
    };

    double alpha = opts.armijo.init_step;
    double best_r = kInf, checkpoint_r = kInf;
    long checkpoint_it = 0;
    const long max_iter = std::min(opts.max_iter, 20000L);
    long it = 0;
    for (; it < max_iter; ++it) {
        // Far above the tolerance the residual sits on a round-off floor set by the size of J; stop once it stops halving.
        if (best_r < 0.5 * checkpoint_r) {
            checkpoint_r = best_r;
            checkpoint_it = it;
        } else if (it - checkpoint_it > 2000) {
            break;
        }
        if (it > 0 && it % 50 == 0) {
            nodes = reparametrize(nodes);
            for (std::size_t i = 1; i < NI; ++i) J[i] = obj.value(nodes[i]);
        }
        std::size_t k = 0;
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (std::isfinite(J[i]) && (!std::isfinite(J[k]) || J[i] > J[k])) k = i;
        if (k == 0 || k == NI)
            throw Error(ErrorCode::DegeneratePath, "path maximum sits at an endpoint; no barrier between them");

        if (it % 50 == 0) {
            for (std::size_t nb : {k - 1, k + 1}) {
                auto [z, Jz] = segment_max(obj, nodes[nb], nodes[k]);
                if (Jz > J[k]) {
                    nodes[k] = z;
                    J[k] = Jz;
                }
            }
        }

        const VectorXd g = obj.grad(nodes[k]);
        const double r = g.lpNorm<Eigen::Infinity>();
        best_r = std::min(best_r, r);
        if (it % 200 == 0) {
            const double floor = round_off_floor(spec, nodes[k]);
            if (floor > opts.grad_tol) {
                std::ostringstream os;
                os << "mountain pass abandoned: round-off floor " << floor << " of the gradient near the path maximum (J = "
                   << J[k] << ") exceeds the tolerance " << opts.grad_tol << "; best residual " << best_r;
                throw Error(ErrorCode::MaxIterExceeded, os.str());
            }
        }
        if (r <= opts.grad_tol && acceptable(nodes[k], J[k]))
            return make_point(spec, obj, nodes[k], r, PointKind::Saddle, DescentStatus::Converged, it,
                              "mountain_pass");
        if (opts.polish && r <= 1e-3 * std::max(1.0, std::abs(J[k])) && it % 10 == 0) {
            auto z = newton_polish(obj, nodes[k], opts.grad_tol, [](const VectorXd&) { return true; });
            if (z && (*z - nodes[k]).norm() <= 0.1 * (1 + nodes[k].norm())) {
                const double Jz = obj.value(*z);
                if (acceptable(*z, Jz))
                    return make_point(spec, obj, *z, obj.grad(*z).lpNorm<Eigen::Infinity>(), PointKind::Saddle,
                                      DescentStatus::Converged, it, "mountain_pass");
            }
        }

        // Keep the top node within half a spacing of its neighbours so it slides along the path instead of leaving it.
        const double spacing = std::min((nodes[k] - nodes[k - 1]).norm(), (nodes[k + 1] - nodes[k]).norm());
        const double gnorm = g.norm();
        double step = gnorm > 0 && spacing > 0 ? std::min(alpha, 0.5 * spacing / gnorm) : alpha;
        bool moved = false;
        for (int bt = 0; bt < 200; ++bt, step *= opts.armijo.backtrack) {
            const VectorXd z = nodes[k] - step * g;
            if ((z - nodes[k]).lpNorm<Eigen::Infinity>() <= 1e-16 * (1 + nodes[k].lpNorm<Eigen::Infinity>())) break;
            const double Jz = obj.value(z);
            if (std::isfinite(Jz) && Jz <= J[k] - opts.armijo.c * step * g.squaredNorm()) {
                nodes[k] = z;
                J[k] = Jz;
                moved = true;
                break;
            }
        }
        if (!moved) {
            // Round-off floor: nothing left to gain from the path, only Newton can finish.
            auto z = opts.polish ? newton_polish(obj, nodes[k], opts.grad_tol, [](const VectorXd&) { return true; })
                                 : std::nullopt;
            if (z && acceptable(*z, obj.value(*z)))
                return make_point(spec, obj, *z, obj.grad(*z).lpNorm<Eigen::Infinity>(), PointKind::Saddle,
                                  DescentStatus::Converged, it, "mountain_pass");
            break;
        }
        alpha = std::min(step * 2, 1e12);
    }
    std::ostringstream os;
    os << "mountain pass stopped after " << it << " iterations with best residual " << best_r;
    throw Error(ErrorCode::MaxIterExceeded, os.str());
}

KKTMultipliers kkt_multipliers_from_gradient(const Eigen::VectorXd& g, const Eigen::VectorXd& u, double zeta,
                                             double gamma) {
    const double n = u.norm();
    const double tol_in = 1e-8 * std::max(1.0, zeta), tol_out = 1e-8 * std::max(1.0, gamma);
    if (n < zeta - tol_in || n > gamma + tol_out) {
        std::ostringstream os;
        os << "‖u‖ = " << n << " outside [" << zeta << ", " << gamma << "]";
        throw Error(ErrorCode::InfeasiblePoint, os.str());
    }
    KKTMultipliers k{0, 0, 1.0, 0};
    const double proj = n > 0 ? g.dot(u) / (n * n) : 0.0;
    if (std::abs(n - gamma) <= tol_out) k.sigma = std::max(0.0, -proj);
    else if (std::abs(n - zeta) <= tol_in) k.theta = std::max(0.0, proj);
    k.stationarity = (g + (k.sigma - k.theta) * u).lpNorm<Eigen::Infinity>();
    return k;
}

KKTMultipliers kkt_multipliers(const ProblemSpec& spec, const Eigen::VectorXd& u, double zeta, double gamma) {
    return kkt_multipliers_from_gradient(gradient_residual(spec, u), u, zeta, gamma);
}

PositivityReport verify_positive(const ProblemSpec& spec, const Eigen::VectorXd& u) {
    const auto& g = spec.graph;
    PositivityReport r{true, true, true, kInf, ""};
    std::ostringstream os;
    if (u.size() != g.size()) {
        r = {false, false, false, kNaN, "function length does not match the graph"};
        return r;
    }
    for (Index x = g.interior_size(); x < g.size(); ++x)
        if (u(x) != 0.0) {
            r.boundary_zero = false;
            os << "u(" << g.label(x) << ") = " << u(x) << " on the boundary. ";
        }
    Index worst = -1;
    for (Index x = 0; x < g.interior_size(); ++x)
        if (u(x) < r.min_interior) {
            r.min_interior = u(x);
            worst = x;
        }
    for (Index x = 0; x < g.size(); ++x)
        if (u(x) < 0.0) r.negative_part_zero = false;
    if (!(r.min_interior > 0.0)) {
        r.strictly_positive = false;
        os << "u(" << g.label(worst) << ") = " << r.min_interior
           << " on S: at an interior minimum with u <= 0 the difference terms are non-positive while "
              "λf(x,0) > 0, so this cannot solve the u₊ problem.";
    }
    r.message = os.str();
    return r;
}

namespace {

struct Collector {
    const ProblemSpec& spec;
    const SolverOptions& opts;
    SolveReport& rep;

    bool accept(CriticalPoint cp) {
        if (cp.u.size() == 0 || !std::isfinite(cp.value)) return false;
        if (cp.status != DescentStatus::Converged || cp.gradient_inf > opts.grad_tol) {
            for (const auto& r : rep.rejected)
                if (same_point(r.u, cp.u)) return false;
            rep.rejected.push_back(std::move(cp));
            return false;
        }
        cp.residual_inf = cp.gradient_inf;
        for (auto& s : rep.solutions)
            if (same_point(s.u, cp.u)) {
                if (cp.gradient_inf < s.gradient_inf) {
                    cp.kind = s.kind == PointKind::Saddle ? s.kind : cp.kind;
                    s = std::move(cp);
                }
                return false;
            }
        rep.solutions.push_back(std::move(cp));
        return true;
    }

    std::vector<const CriticalPoint*> minimizers() const {
        std::vector<const CriticalPoint*> out;
        for (const auto& s : rep.solutions)
            if (s.kind == PointKind::Minimizer) out.push_back(&s);
        std::sort(out.begin(), out.end(), [](auto* l, auto* r) { return l->value < r->value; });
        return out;
    }
};

VectorXd random_positive(std::mt19937_64& rng, Index n, double scale) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = scale * unit(rng);
    return v;
}

} // namespace

SolveReport solve(const ProblemSpec& spec, const SolverOptions& opts, std::optional<double> gamma) {
    SolveReport rep;
    rep.seed = opts.rng_seed;
    const auto c = instance_constants(spec);
    std::optional<double> valid_gamma;
    if (gamma) {
        if (*gamma > gamma0(c)) valid_gamma = gamma;
        else rep.notes.push_back("gamma <= gamma0; annulus construction skipped");
    }
    rep.thresholds = lambda_thresholds(c, valid_gamma, spec.lambda);
    rep.regime = classify_regime(c, spec.lambda, valid_gamma);
    const auto& reg = rep.regime;
    if (!c.has_envelope) rep.notes.push_back("no growth envelope declared; no existence theorem applies");
    else if (reg.empty()) rep.notes.push_back("no existence theorem applies at this lambda");

    Collector col{spec, opts, rep};
    const Index ns = spec.graph.interior_size();
    std::mt19937_64 rng(opts.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_scale = [&]() { return std::pow(10.0, -2.0 + 3.0 * unit(rng)); };
    bool ran_pass = false;

    const bool direct = reg.has(RegimeTag::DirectAllLambda) || reg.has(RegimeTag::DirectBounded) || reg.empty();
    if (direct) {
        int diverged = 0;
        std::vector<VectorXd> starts{VectorXd::Zero(ns)};
        for (int k = 0; k < opts.restarts; ++k) starts.push_back(random_positive(rng, ns, random_scale()));
        for (const auto& s : starts) {
            auto cp = descend(spec, lift(spec, s), NoConstraint{}, opts);
            if (cp.status == DescentStatus::Diverged) ++diverged;
            else col.accept(std::move(cp));
        }
        if (diverged) {
            rep.notes.push_back(std::to_string(diverged) + " unconstrained descents diverged");
            // Shallow local minima are stepped over by unconstrained runs; balls of
            // growing radius keep them, and an interior ball minimizer is critical.
            for (int k = -3; k <= 10; ++k) {
                const double r = std::ldexp(1.0, k);
                auto cp = descend(spec, lift(spec, VectorXd::Zero(ns)), Ball{r}, opts);
                if (cp.norm >= r * (1 - 1e-6)) continue;
                cp.origin = "ball_scan";
                col.accept(std::move(cp));
            }
        }
    }

    const double R = c.has_envelope ? omega_radius(c) : 0.0;
    if (reg.has(RegimeTag::Ekeland) || reg.has(RegimeTag::TwoSolutions)) {
        std::vector<VectorXd> starts;
        try {
            auto sp = spike_point(spec);
            starts.push_back(restrict_interior(spec, sp.u));
            if (sp.halvings > 0)
                rep.notes.push_back("spike height halved " + std::to_string(sp.halvings) +
                                    " extra times to reach J < 0");
        } catch (const Error& e) {
            rep.notes.push_back(std::string("spike construction: ") + e.what());
        }
        for (int k = 0; k < opts.restarts / 2; ++k) {
            VectorXd v = random_positive(rng, ns, 1.0);
            starts.push_back(v * (R * unit(rng) / std::max(v.norm(), 1e-300)));
        }
        int pinned = 0;
        for (const auto& s : starts) {
            auto cp = descend(spec, lift(spec, s), Ball{R}, opts);
            cp.origin = "ball_descent";
            if (cp.norm >= R * (1 - 1e-9)) ++pinned;
            col.accept(std::move(cp));
        }
        if (pinned) rep.notes.push_back(std::to_string(pinned) + " ball descents ended on the sphere of radius omega_radius");
    }

    auto run_pass = [&](const VectorXd& from, const VectorXd& to, const std::string& label) {
        try {
            auto cp = mountain_pass(spec, from, to, opts);
            cp.origin = label;
            col.accept(std::move(cp));
        } catch (const Error& e) {
            rep.notes.push_back(label + ": " + e.what());
        }
    };

    auto lowest_minimizer = [&](double max_norm) -> std::optional<VectorXd> {
        for (const auto* m : col.minimizers())
            if (m->norm < max_norm) return m->u;
        return std::nullopt;
    };

    if (reg.has(RegimeTag::TwoSolutions)) {
        try {
            auto sm = min_on_sphere(spec, R, opts);
            rep.sphere_min_estimate = sm.value;
            auto u0 = lowest_minimizer(R);
            if (!u0) {
                rep.notes.push_back("no interior minimizer inside omega_radius; mountain pass skipped");
            } else {
                auto hill = hill_point(spec, std::min(sm.value, energy_value(spec, *u0)), R);
                run_pass(*u0, hill, "mountain_pass");
                ran_pass = true;
            }
        } catch (const Error& e) {
            rep.notes.push_back(std::string("two-solution construction: ") + e.what());
        }
    }

    if (reg.has(RegimeTag::TwoSolutionsKKT) && valid_gamma) {
        const double G = *valid_gamma;
        const double zeta = std::clamp((1 + G) / 2, std::nextafter(1.0, G), std::nextafter(G, 1.0));
        CriticalPoint best;
        best.value = kInf;
        std::vector<VectorXd> starts{constant_direction(ns) * (zeta + G) / 2};
        for (int k = 0; k < opts.restarts / 2; ++k) {
            VectorXd v = random_positive(rng, ns, 1.0);
            starts.push_back(v * ((zeta + (G - zeta) * unit(rng)) / std::max(v.norm(), 1e-300)));
        }
        for (const auto& s : starts) {
            auto cp = descend(spec, lift(spec, s), Annulus{zeta, G}, opts);
            if (std::isfinite(cp.value) && cp.value < best.value) best = cp;
        }
        if (best.u.size()) {
            auto k = kkt_multipliers(spec, best.u, zeta, G);
            rep.kkt = k;
            if (k.sigma == 0 && k.theta == 0 && best.gradient_inf <= opts.grad_tol) {
                best.origin = "annulus_descent";
                col.accept(best);
            } else {
                std::ostringstream os;
                os << "annulus minimizer has norm " << best.norm << " with sigma = " << k.sigma
                   << ", theta = " << k.theta << "; it is not a critical point of J";
                rep.notes.push_back(os.str());
            }
        }
        try {
            auto sm = min_on_sphere(spec, G, opts);
            rep.sphere_min_estimate = sm.value;
            auto u0 = lowest_minimizer(G);
            if (!u0) {
                auto cp = descend(spec, lift(spec, VectorXd::Zero(ns)), NoConstraint{}, opts);
                if (col.accept(cp) || cp.status == DescentStatus::Converged) u0 = cp.u;
            }
            if (u0 && !ran_pass) {
                auto hill = hill_point(spec, std::min(sm.value, energy_value(spec, *u0)), G);
                run_pass(*u0, hill, "mountain_pass");
                ran_pass = true;
            }
        } catch (const Error& e) {
            rep.notes.push_back(std::string("annulus construction: ") + e.what());
        }
    }

    if (!reg.has(RegimeTag::DirectAllLambda) && !ran_pass) {
        auto mins = col.minimizers();
        if (!mins.empty()) {
            const VectorXd u0 = mins.front()->u;
            try {
                auto hill = hill_point(spec, energy_value(spec, u0), u0.norm());
                run_pass(u0, hill, "mountain_pass");
                rep.notes.push_back("mountain pass attempted without a multiplicity theorem");
            } catch (const Error&) {
            }
        }
    }

    {
        auto mins = col.minimizers();
        std::vector<VectorXd> us;
        for (const auto* m : mins) us.push_back(m->u);
        for (std::size_t i = 0; i + 1 < us.size() && i < 4; ++i)
            for (std::size_t j = i + 1; j < us.size() && j < 5; ++j) run_pass(us[i], us[j], "mountain_pass_between_minimizers");
    }

    for (auto& s : rep.solutions) {
        const auto pos = verify_positive(spec, s.u);
        s.positive_on_S = pos.ok();
        if (std::isnan(s.residual_original))
            rep.notes.push_back("a solution is negative somewhere on S; residual_original undefined");
    }
    std::sort(rep.solutions.begin(), rep.solutions.end(),
              [](const CriticalPoint& l, const CriticalPoint& r) { return l.norm < r.norm; });
    std::sort(rep.rejected.begin(), rep.rejected.end(),
              [](const CriticalPoint& l, const CriticalPoint& r) { return l.gradient_inf < r.gradient_inf; });
    if (rep.rejected.size() > 4) rep.rejected.resize(4);
    std::erase_if(rep.rejected, [&](const CriticalPoint& r) {
        return std::any_of(rep.solutions.begin(), rep.solutions.end(),
                           [&](const CriticalPoint& s) { return same_point(s.u, r.u); });
    });
    if (rep.solutions.empty()) rep.notes.push_back("no critical point reached the gradient tolerance");
    return rep;
}

} // namespace plap
