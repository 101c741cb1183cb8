#include <gtest/gtest.h>

#include "support.hpp"

using namespace plap;
namespace pt = plap::testing;

namespace {

// Path instance with p ≡ 2, q ≡ 1, λ = 1, f ≡ 1; vertex order is (v1, v0, v2).
ProblemSpec path_instance() { return pt::scalar_problem(1.0); }

Eigen::VectorXd fd_gradient(const ProblemSpec& spec, const Eigen::VectorXd& u, double h) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(u.size());
    for (Index x = 0; x < spec.graph.interior_size(); ++x) {
        Eigen::VectorXd up = u, um = u;
        up(x) += h;
        um(x) -= h;
        g(x) = (energy_value(spec, up) - energy_value(spec, um)) / (2 * h);
    }
    return g;
}

} // namespace

TEST(Energy, ZeroFunction) {
    auto spec = path_instance();
    auto e = energy(spec, Eigen::VectorXd::Zero(3));
    EXPECT_EQ(e.total, 0.0);
    EXPECT_EQ(e.dirichlet_term, 0.0);
    EXPECT_EQ(e.potential_term, 0.0);
    EXPECT_EQ(e.source_term, 0.0);
}

TEST(Energy, PathHandSum) {
    auto spec = path_instance();
    auto e = energy(spec, Eigen::Vector3d(1, 0, 0));
    EXPECT_DOUBLE_EQ(e.dirichlet_term, 1.0);
    EXPECT_DOUBLE_EQ(e.potential_term, 0.5);
    EXPECT_DOUBLE_EQ(e.source_term, 1.0);
    EXPECT_DOUBLE_EQ(e.total, 0.5);
}

TEST(Energy, RejectsNonDirichletInput) {
    auto spec = path_instance();
    EXPECT_THROW(energy(spec, Eigen::Vector3d(1, 0.5, 0)), Error);
    EXPECT_THROW(energy(spec, Eigen::Vector2d(1, 0)), Error);
    EXPECT_THROW(gradient_residual(spec, Eigen::Vector3d(0, 0, 1)), Error);
}

TEST(Energy, GradientOnPath) {
    auto spec = path_instance();
    auto r = gradient_residual(spec, Eigen::Vector3d(1, 0, 0));
    EXPECT_DOUBLE_EQ(r(0), 2.0);
    EXPECT_EQ(r(1), 0.0);
    EXPECT_EQ(r(2), 0.0);
    EXPECT_DOUBLE_EQ(equation_residual(spec, Eigen::Vector3d(1, 0, 0))(0), 2.0);
}

TEST(Energy, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 200; ++k) {
        auto spec = pt::random_problem(rng);
        const Eigen::VectorXd u = pt::random_dirichlet(rng, spec.graph, -2, 2);
        const Eigen::VectorXd g = gradient_residual(spec, u);
        const Eigen::VectorXd fd = fd_gradient(spec, u, 1e-6);
        for (Index x = 0; x < spec.graph.interior_size(); ++x)
            EXPECT_LE(std::abs(g(x) - fd(x)), 1e-5 * std::max(1.0, std::abs(g(x)))) << "draw " << k << " x=" << x;
    }
}

TEST(Energy, EquationResidualMatchesGradientForConstantExponent) {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 50; ++k) {
        Graph g = pt::random_graph(rng, 4, 2);
        auto p = ExponentField::make(g, Eigen::VectorXd::Constant(g.size(), pt::uniform(rng, 2, 5)));
        auto q = Potential::make(g, pt::random_vector(rng, 4, 0.5, 2));
        auto f = power_plus(pt::random_vector(rng, 4, 0.5, 2), pt::random_vector(rng, 4, 2, 6),
                            pt::random_vector(rng, 4, 0.1, 1));
        auto spec = make_problem(g, p, q, f, 0.5);
        const Eigen::VectorXd u = pt::random_dirichlet(rng, spec.graph, -2, 2);
        EXPECT_LE((gradient_residual(spec, u) - equation_residual(spec, u)).lpNorm<Eigen::Infinity>(),
                  1e-11 * (1 + gradient_residual(spec, u).lpNorm<Eigen::Infinity>()));
    }
}

TEST(Energy, DirectionalSlopeIsGradientDotDirection) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 100; ++k) {
        auto spec = pt::random_problem(rng);
        const Eigen::VectorXd u = pt::random_dirichlet(rng, spec.graph, -2, 2);
        const Eigen::VectorXd v = pt::random_dirichlet(rng, spec.graph, -2, 2);
        EXPECT_EQ(directional_slope(spec, u, v), gradient_residual(spec, u).dot(v));
    }
}

TEST(Energy, SlopeAlongIndicatorAndAtZero) {
    std::mt19937_64 rng(37);
    auto spec = pt::random_problem(rng);
    const Index n = spec.graph.size(), ns = spec.graph.interior_size();
    const Eigen::VectorXd u = pt::random_dirichlet(rng, spec.graph, -1, 1);
    const Eigen::VectorXd g = gradient_residual(spec, u);
    for (Index x = 0; x < ns; ++x) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(x) = 1;
        EXPECT_EQ(directional_slope(spec, u, e), g(x));
    }
    const Eigen::VectorXd v = pt::random_dirichlet(rng, spec.graph, -1, 1);
    double expected = 0;
    for (Index x = 0; x < ns; ++x) expected -= spec.lambda * eval_f(spec.f, x, 0.0) * v(x);
    EXPECT_NEAR(directional_slope(spec, Eigen::VectorXd::Zero(n), v), expected, 1e-14 * (1 + std::abs(expected)));
}

// Testing with the negative part: the slope is at most -Σ q |u₋|^p.
TEST(Energy, SlopeAlongNegativePart) {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 200; ++k) {
        auto spec = pt::random_problem(rng);
        const Eigen::VectorXd u = pt::random_dirichlet(rng, spec.graph, -2, 2);
        const Eigen::VectorXd minus = norm_and_parts(u).minus;
        double bound = 0;
        for (Index x = 0; x < spec.graph.interior_size(); ++x)
            bound -= spec.q.values(x) * abs_power(minus(x), spec.p.values(x));
        EXPECT_LE(directional_slope(spec, u, minus), bound + 1e-12 * (1 + std::abs(bound)));
    }
}

TEST(Energy, QuadraticTermsNonnegative) {
    std::mt19937_64 rng(43);
    for (int k = 0; k < 200; ++k) {
        auto spec = pt::random_problem(rng);
        const auto e = energy(spec, pt::random_dirichlet(rng, spec.graph, -3, 3));
        EXPECT_GE(e.dirichlet_term, 0.0);
        EXPECT_GE(e.potential_term, 0.0);
        EXPECT_DOUBLE_EQ(e.total, e.dirichlet_term + e.potential_term - e.source_term);
    }
}

TEST(Energy, ResidualOriginal) {
    auto spec = path_instance();
    EXPECT_LE(residual_original(spec, Eigen::Vector3d(1.0 / 3.0, 0, 0)), 1e-10);
    try {
        residual_original(spec, Eigen::Vector3d(-1, 0, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NegativeArgument);
    }
    std::mt19937_64 rng(47);
    for (int k = 0; k < 50; ++k) {
        auto s = pt::random_problem(rng);
        const Eigen::VectorXd u = pt::random_dirichlet(rng, s.graph, 0, 2);
        EXPECT_EQ(residual_original(s, u), equation_residual(s, u).lpNorm<Eigen::Infinity>());
    }
}

TEST(Energy, GradientScaleBoundsGradient) {
    std::mt19937_64 rng(53);
    for (int k = 0; k < 50; ++k) {
        auto spec = pt::random_problem(rng);
        const Eigen::VectorXd u = pt::random_dirichlet(rng, spec.graph, -2, 2);
        EXPECT_TRUE((gradient_residual(spec, u).cwiseAbs().array() <= gradient_scale(spec, u).array() * (1 + 1e-12)).all());
    }
}

TEST(Energy, LiftAndRestrict) {
    auto spec = pt::cubic_problem();
    Eigen::VectorXd x(1);
    x << 0.25;
    const Eigen::VectorXd u = lift(spec, x);
    EXPECT_EQ(u.size(), 3);
    EXPECT_EQ(u(0), 0.25);
    EXPECT_EQ(restrict_interior(spec, u), x);
}
