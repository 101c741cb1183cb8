#pragma once

// Instance builders shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "plap/plap.hpp"

namespace plap::testing {

inline Graph path_graph(double w = 1.0) {
    return build_graph({"v1"}, {"v0", "v2"}, {{"v0", "v1", w}, {"v1", "v2", w}});
}

/// Triangle x1 x2 x3 with a pendant boundary vertex on each corner, all weights a.
inline Graph example_graph(double a = 1.0) {
    return build_graph({"x1", "x2", "x3"}, {"x4", "x5", "x6"},
                       {{"x1", "x2", a}, {"x2", "x3", a}, {"x3", "x1", a}, {"x1", "x4", a}, {"x2", "x5", a}, {"x3", "x6", a}});
}

inline ProblemSpec path_problem(double lambda, Nonlinearity f, double p = 2.0, double q = 1.0) {
    Graph g = path_graph();
    auto pf = ExponentField::make(g, Eigen::VectorXd::Constant(3, p));
    auto qf = Potential::make(g, Eigen::VectorXd::Constant(1, q));
    return make_problem(std::move(g), std::move(pf), std::move(qf), std::move(f), lambda);
}

inline Nonlinearity constant_f(Index n, double c) {
    return power_plus(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, 2.0), Eigen::VectorXd::Constant(n, c));
}

inline ProblemSpec scalar_problem(double lambda = 1.0) { return path_problem(lambda, constant_f(1, 1.0)); }

/// p ≡ 2, q ≡ 1, f = t³ + 0.1 on the path.
inline ProblemSpec cubic_problem(double lambda = 0.4) {
    auto f = power_plus(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 4.0),
                        Eigen::VectorXd::Constant(1, 0.1));
    return path_problem(lambda, std::move(f));
}

inline ProblemSpec example_problem(const Eigen::VectorXd& m, double lambda) {
    Graph g = example_graph();
    Eigen::VectorXd p(6), q(3), phi(3), psi(3);
    for (int i = 1; i <= 6; ++i) p(i - 1) = i + 3;
    for (int i = 1; i <= 3; ++i) {
        q(i - 1) = std::exp(double(i + 31));
        phi(i - 1) = 3 * i - 1;
        psi(i - 1) = i;
    }
    auto pf = ExponentField::make(g, p);
    auto qf = Potential::make(g, q);
    return make_problem(std::move(g), std::move(pf), std::move(qf), modulated_power(m, phi, psi), lambda);
}

inline Eigen::VectorXd example_m_squares() { return Eigen::Vector3d(2, 8, 18); }
inline Eigen::VectorXd example_m_linear() { return Eigen::Vector3d(10, 20, 30); }

/// Connected graph with n_s interior and n_b boundary vertices: a random spanning tree plus extra edges.
inline Graph random_graph(std::mt19937_64& rng, Index n_s, Index n_b, double extra_prob = 0.3) {
    std::vector<std::string> interior, boundary;
    for (Index i = 0; i < n_s; ++i) interior.push_back("s" + std::to_string(i));
    for (Index i = 0; i < n_b; ++i) boundary.push_back("b" + std::to_string(i));
    std::vector<std::string> all = interior;
    all.insert(all.end(), boundary.begin(), boundary.end());
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> w(0.2, 3.0), coin(0.0, 1.0);
    Eigen::MatrixXi used = Eigen::MatrixXi::Zero(Index(all.size()), Index(all.size()));
    std::vector<EdgeSpec> edges;
    for (std::size_t k = 1; k < order.size(); ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        const std::size_t a = order[k], b = order[pick(rng)];
        used(Index(a), Index(b)) = used(Index(b), Index(a)) = 1;
        edges.push_back({all[a], all[b], w(rng)});
    }
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            if (!used(Index(a), Index(b)) && coin(rng) < extra_prob) edges.push_back({all[a], all[b], w(rng)});
    return build_graph(interior, boundary, edges);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_int(std::mt19937_64& rng, Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
    return v;
}

/// u ∈ A with interior values in [lo, hi].
inline Eigen::VectorXd random_dirichlet(std::mt19937_64& rng, const Graph& g, double lo, double hi) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
    u.head(g.interior_size()) = random_vector(rng, g.interior_size(), lo, hi);
    return u;
}

/// Random graph (≤ 12 vertices), p ∈ [2,6], q ∈ [0.5,2], PowerPlus f with φ ∈ [0.5,2], m ∈ [2,8], ψ ∈ [0.1,1].
inline ProblemSpec random_problem(std::mt19937_64& rng, Index max_vertices = 12) {
    const Index ns = uniform_int(rng, 1, max_vertices - 1);
    const Index nb = uniform_int(rng, 1, max_vertices - ns);
    Graph g = random_graph(rng, ns, nb);
    auto p = ExponentField::make(g, random_vector(rng, g.size(), 2.0, 6.0));
    auto q = Potential::make(g, random_vector(rng, ns, 0.5, 2.0));
    auto f = power_plus(random_vector(rng, ns, 0.5, 2.0), random_vector(rng, ns, 2.0, 8.0),
                        random_vector(rng, ns, 0.1, 1.0));
    return make_problem(std::move(g), std::move(p), std::move(q), std::move(f), uniform(rng, 0.1, 2.0));
}

/// p ∈ [5,6] against m ∈ [2,4.5], so m₂⁺ < p⁻ and J is coercive.
inline ProblemSpec coercive_problem(std::mt19937_64& rng, double lambda) {
    const Index ns = uniform_int(rng, 1, 6), nb = uniform_int(rng, 1, 3);
    Graph g = random_graph(rng, ns, nb);
    auto p = ExponentField::make(g, random_vector(rng, g.size(), 5.0, 6.0));
    auto q = Potential::make(g, random_vector(rng, ns, 0.5, 2.0));
    auto f = power_plus(random_vector(rng, ns, 0.5, 2.0), random_vector(rng, ns, 2.0, 4.5),
                        random_vector(rng, ns, 0.1, 1.0));
    return make_problem(std::move(g), std::move(p), std::move(q), std::move(f), lambda);
}

} // namespace plap::testing
