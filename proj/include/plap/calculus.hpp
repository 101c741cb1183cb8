#pragma once

// Discrete p(x)-calculus on a weighted graph. Vertex functions are Eigen
// column vectors indexed in Graph order; the exponent field p lives on S̄.

#include <Eigen/Dense>

#include <cmath>

#include "plap/error.hpp"
#include "plap/graph.hpp"

namespace plap {

/// |a|^p, computed as exp(p ln|a|) and pinned to 0 at a = 0.
template <typename T>
T abs_power(T a, T p) {
    using std::abs, std::exp, std::log;
    if (a == T(0)) return T(0);
    return exp(p * log(abs(a)));
}

/// |d|^(p-2) d, zero at d = 0 for every p ≥ 2. Throws DomainError for p < 2.
template <typename T>
T signed_power(T d, T p) {
    if (!(p >= T(2))) throw Error(ErrorCode::DomainError, "signed_power needs p >= 2");
    if (d == T(0)) return T(0);
    if (p == T(2)) return d;
    return d < T(0) ? -abs_power(d, p - T(1)) : abs_power(d, p - T(1));
}

namespace detail {
inline void check_vertex(const Graph& g, Index x) {
    if (x < 0 || x >= g.size()) throw Error(ErrorCode::UnknownVertex, "index out of range");
}
} // namespace detail

/// Component y: signed_power(u(y) - u(x), p(x)) * sqrt(ω(x,y)).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
p_gradient(const Graph& g, const Eigen::VectorXd& p, const Eigen::MatrixBase<Derived>& u, Index x) {
    using S = typename Derived::Scalar;
    detail::check_vertex(g, x);
    Eigen::Matrix<S, Eigen::Dynamic, 1> out = Eigen::Matrix<S, Eigen::Dynamic, 1>::Zero(g.size());
    for (Index y : g.neighbors(x)) {
        using std::sqrt;
        out(y) = signed_power<S>(u(y) - u(x), S(p(x))) * sqrt(S(g.weight(x, y)));
    }
    return out;
}

template <typename Derived>
typename Derived::Scalar p_laplacian(const Graph& g, const Eigen::VectorXd& p,
                                     const Eigen::MatrixBase<Derived>& u, Index x) {
    using S = typename Derived::Scalar;
    detail::check_vertex(g, x);
    S acc(0);
    for (Index y : g.neighbors(x)) acc += signed_power<S>(u(y) - u(x), S(p(x))) * S(g.weight(x, y));
    return acc;
}

/// The p(x)-Laplacian at every vertex of S̄.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
p_laplacian(const Graph& g, const Eigen::VectorXd& p, const Eigen::MatrixBase<Derived>& u) {
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(g.size());
    for (Index x = 0; x < g.size(); ++x) out(x) = p_laplacian(g, p, u, x);
    return out;
}

/// Gradient of u ↦ ½ Σ_x (1/p(x)) Σ_y |u(y)-u(x)|^{p(x)} ω(x,y) over all of S̄.
/// Each edge contributes with both endpoint exponents; when p is constant
/// along every edge this is exactly -Δ_{p(x)} u.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
dirichlet_gradient(const Graph& g, const Eigen::VectorXd& p, const Eigen::MatrixBase<Derived>& u) {
    using S = typename Derived::Scalar;
    Eigen::Matrix<S, Eigen::Dynamic, 1> out(g.size());
    for (Index z = 0; z < g.size(); ++z) {
        S acc(0);
        for (Index y : g.neighbors(z)) {
            const S d = u(z) - u(y);
            acc += S(g.weight(z, y)) * (signed_power<S>(d, S(p(z))) + signed_power<S>(d, S(p(y))));
        }
        out(z) = acc / S(2);
    }
    return out;
}

template <typename Derived>
typename Derived::Scalar integrate(const Graph& g, const Eigen::MatrixBase<Derived>& v) {
    if (v.size() != g.size()) throw Error(ErrorCode::InvariantError, "vertex function has wrong length");
    typename Derived::Scalar acc(0);
    for (Index x = 0; x < v.size(); ++x) acc += v(x);
    return acc;
}

template <typename S>
struct GreenPairing {
    S lhs;
    S rhs;
};

/// lhs = 2 Σ_x (-Δ_{p(x)} u(x)) v(x);
/// rhs = Σ_{x,y} signed_power(u(y)-u(x), p(x)) (v(y)-v(x)) ω(x,y).
template <typename DU, typename DV>
GreenPairing<typename DU::Scalar> green_pairing(const Graph& g, const Eigen::VectorXd& p,
                                                const Eigen::MatrixBase<DU>& u,
                                                const Eigen::MatrixBase<DV>& v) {
    using S = typename DU::Scalar;
    S lhs(0), rhs(0);
    for (Index x = 0; x < g.size(); ++x) {
        lhs += S(2) * (-p_laplacian(g, p, u, x)) * S(v(x));
        for (Index y : g.neighbors(x))
            rhs += signed_power<S>(u(y) - u(x), S(p(x))) * S(v(y) - v(x)) * S(g.weight(x, y));
    }
    return {lhs, rhs};
}

template <typename S>
struct SignParts {
    S norm;
    Eigen::Matrix<S, Eigen::Dynamic, 1> plus;
    Eigen::Matrix<S, Eigen::Dynamic, 1> minus;
};

/// ‖u‖ = (Σ_{S̄} u²)^{1/2}, u₊ = max(u,0), u₋ = max(-u,0).
template <typename Derived>
SignParts<typename Derived::Scalar> norm_and_parts(const Eigen::MatrixBase<Derived>& u) {
    using S = typename Derived::Scalar;
    SignParts<S> out;
    out.norm = u.norm();
    out.plus = u.cwiseMax(S(0));
    out.minus = (-u).cwiseMax(S(0));
    return out;
}

} // namespace plap
