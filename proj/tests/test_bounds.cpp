#include <gtest/gtest.h>

#include "support.hpp"

using namespace plap;
namespace pt = plap::testing;

namespace {

InstanceConstants example_constants(const Eigen::VectorXd& m, double lambda = 1e-4) {
    return instance_constants(pt::example_problem(m, lambda));
}

} // namespace

TEST(Bounds, InequalityConstantsOnSmallGraphs) {
    const auto path = instance_constants(pt::cubic_problem());
    EXPECT_NEAR(inequality_bound(Inequality::A3, path, 2).factor, 1.0 / 3.0, 1e-15);
    EXPECT_EQ(inequality_bound(Inequality::A1, path, 1).factor, 1.0);
    EXPECT_EQ(inequality_bound(Inequality::A2, path, 2).factor, 4.0 * 3 * 1);
    EXPECT_NEAR(inequality_bound(Inequality::A7, path, 0).factor, std::sqrt(3.0), 1e-15);

    const auto ex = example_constants(pt::example_m_squares());
    EXPECT_NEAR(inequality_bound(Inequality::A7, ex, 0).factor, std::sqrt(6.0), 1e-15);
    EXPECT_EQ(inequality_bound(Inequality::A1, ex, 1).factor, 3.0);
    const auto a4 = inequality_bound(Inequality::A4, ex, 0);
    EXPECT_NEAR(a4.factor, std::pow(2.0, -2) * 9 * std::pow(6.0, -3), 1e-16);
    EXPECT_EQ(a4.offset, 3.0);
    const auto a5 = inequality_bound(Inequality::A5, ex, 2);
    EXPECT_EQ(a5.factor, std::pow(2.0, 9) * 6 * 3);
    EXPECT_EQ(a5.offset, 36.0);
    const auto a6 = inequality_bound(Inequality::A6, ex, 2);
    EXPECT_EQ(a6.factor, 3.0);
    EXPECT_EQ(a6.offset, 3.0);
}

TEST(Bounds, DomainErrors) {
    const auto c = instance_constants(pt::cubic_problem());
    for (auto w : {Inequality::A2, Inequality::A3, Inequality::A5, Inequality::A6}) {
        try {
            inequality_bound(w, c, 1.5);
            FAIL() << to_string(w);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::DomainError);
        }
    }
    EXPECT_THROW(inequality_bound(Inequality::A1, c, 0.5), Error);
    EXPECT_NO_THROW(inequality_bound(Inequality::A7, c, 0.0));
    EXPECT_NO_THROW(inequality_bound(Inequality::A4, c, 0.0));
}

TEST(Bounds, CheckInequalityExamples) {
    auto spec = pt::cubic_problem();
    const auto r = check_inequality(Inequality::A7, spec, Eigen::Vector3d(1, 0, 0), 2);
    EXPECT_EQ(r.lhs, 1.0);
    EXPECT_NEAR(r.rhs, std::sqrt(3.0), 1e-15);
    EXPECT_TRUE(r.holds);
    for (auto w : all_inequalities()) {
        const auto z = check_inequality(w, spec, Eigen::VectorXd::Zero(3), 2);
        EXPECT_EQ(z.lhs, 0.0) << to_string(w);
        EXPECT_TRUE(z.holds) << to_string(w);
    }
    EXPECT_EQ(check_inequality(Inequality::A4, spec, Eigen::VectorXd::Zero(3), 2).rhs, -1.0);
}

TEST(Bounds, InequalitiesHoldOnRandomDraws) {
    std::mt19937_64 rng(59);
    for (int k = 0; k < 300; ++k) {
        auto spec = pt::random_problem(rng);
        const Eigen::VectorXd u = pt::random_dirichlet(rng, spec.graph, -3, 3);
        for (auto w : all_inequalities()) {
            const auto r = check_inequality(w, spec, u, pt::uniform(rng, 2, 8));
            EXPECT_TRUE(r.holds) << to_string(w) << " lhs=" << r.lhs << " rhs=" << r.rhs << " draw " << k;
        }
    }
}

TEST(Bounds, Gamma0) {
    const auto c = example_constants(pt::example_m_squares());
    EXPECT_NEAR(gamma0(c), 6 * std::sqrt(6.0), 1e-13);
    EXPECT_NEAR(gamma0(c), 14.697, 5e-4);
    EXPECT_NEAR(omega_radius(c), 1 / std::sqrt(6.0), 1e-16);
}

TEST(Bounds, Gamma0ExceedsOne) {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 100; ++k) EXPECT_GT(gamma0(instance_constants(pt::random_problem(rng))), 1.0);
}

TEST(Bounds, CubicThresholds) {
    const auto c = instance_constants(pt::cubic_problem());
    EXPECT_NEAR(lambda2(c), (1.0 / 18) / (1.0 / 36 + 0.1), 1e-14);
    EXPECT_NEAR(lambda2(c), 0.4348, 1e-4);
    EXPECT_EQ(t0(c, 0.4), 1.0);
    EXPECT_NEAR(lambda1(c), (0.5 * 0.5 * 2 / 3) / (0.25 + 0.1 * std::sqrt(3.0)), 1e-14);
}

TEST(Bounds, Lambda3) {
    const auto c = example_constants(pt::example_m_linear());
    try {
        lambda3(c, 14.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GammaTooSmall);
    }
    EXPECT_THROW(lambda_thresholds(c, 14.6), Error);
    const double l3 = lambda3(c, 14.7);
    EXPECT_GT(l3, 0.0);
    EXPECT_TRUE(std::isfinite(l3));
}

TEST(Bounds, Lambda3NumeratorPositiveAboveGamma0) {
    std::mt19937_64 rng(67);
    for (int k = 0; k < 100; ++k) {
        const auto c = instance_constants(pt::random_problem(rng));
        const double g0 = gamma0(c);
        const double gamma = g0 * (1 + pt::uniform(rng, 1e-6, 9));
        const double lead = c.q_minus * std::pow(2.0, -c.p_minus / 2) * std::pow(c.n_boundary, c.p_minus / 2) *
                            std::pow(c.n_total, 1 - c.p_minus) * std::pow(gamma, c.p_minus);
        EXPECT_GT(lead - c.q_minus * c.n_interior, 0.0);
        EXPECT_GT(lambda3(c, gamma), 0.0);
    }
}

TEST(Bounds, T0DegenerateExponent) {
    // p ≡ 4 and f = t³ + ψ give p⁻ = m₁⁺ = 4.
    auto f = power_plus(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 4.0),
                        Eigen::VectorXd::Constant(1, 0.1));
    auto spec = pt::path_problem(0.1, f, 4.0);
    const auto c = instance_constants(spec);
    try {
        t0(c, 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateExponent);
    }
    EXPECT_FALSE(lambda_thresholds(c, std::nullopt, 0.1).t0.has_value());
}

TEST(Bounds, RegimeOnExampleFixtures) {
    const auto base = example_constants(pt::example_m_squares());
    EXPECT_TRUE(classify_regime(base, 1e-4).has(RegimeTag::Ekeland));
    EXPECT_FALSE(classify_regime(base, 1e-4).has(RegimeTag::TwoSolutions));
    const auto variant = example_constants(pt::example_m_linear());
    const auto r = classify_regime(variant, 1e-4);
    EXPECT_TRUE(r.has(RegimeTag::TwoSolutions));
    EXPECT_TRUE(r.has(RegimeTag::Ekeland));
    EXPECT_FALSE(r.has(RegimeTag::DirectAllLambda));
}

TEST(Bounds, RegimeDirect) {
    // p ≡ 6 with m ≤ 4 envelope: m₂⁺ < p⁻.
    auto f = power_plus(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 4.0),
                        Eigen::VectorXd::Constant(1, 0.5));
    const auto c = instance_constants(pt::path_problem(3.0, f, 6.0));
    for (double lambda : {1e-3, 1.0, 1e6}) EXPECT_TRUE(classify_regime(c, lambda).has(RegimeTag::DirectAllLambda));

    auto g = power_plus(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 3.0),
                        Eigen::VectorXd::Constant(1, 0.5));
    const auto d = instance_constants(pt::path_problem(1.0, g, 3.0));
    EXPECT_TRUE(classify_regime(d, 0.5 * lambda1(d)).has(RegimeTag::DirectBounded));
    EXPECT_FALSE(classify_regime(d, 2 * lambda1(d)).has(RegimeTag::DirectBounded));
}

TEST(Bounds, RegimeKKT) {
    const auto c = example_constants(pt::example_m_linear());
    const double l3 = lambda3(c, 14.7);
    EXPECT_TRUE(classify_regime(c, 0.5 * l3, 14.7).has(RegimeTag::TwoSolutionsKKT));
    EXPECT_FALSE(classify_regime(c, 2 * l3, 14.7).has(RegimeTag::TwoSolutionsKKT));
    EXPECT_FALSE(classify_regime(c, 0.5 * l3).has(RegimeTag::TwoSolutionsKKT));
}

TEST(Bounds, NoEnvelopeGivesNaNAndNoTags) {
    const auto c = instance_constants(pt::scalar_problem());
    EXPECT_TRUE(std::isnan(lambda1(c)));
    EXPECT_TRUE(std::isnan(lambda2(c)));
    EXPECT_TRUE(classify_regime(c, 1.0).empty());
    EXPECT_GT(gamma0(c), 1.0);
}

// The full pair count bounds J at a spike; the shorter count can fall below the true value.
TEST(Bounds, SpikeBoundHoldsOnRandomInstances) {
    std::mt19937_64 rng(71);
    int short_failures = 0;
    for (int k = 0; k < 200; ++k) {
        auto spec = pt::random_problem(rng);
        const auto c = instance_constants(spec);
        const Index x = pt::uniform_int(rng, 0, spec.graph.interior_size() - 1);
        const double t = pt::uniform(rng, 1e-3, 1);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(spec.graph.size());
        u(x) = t;
        const double J = energy_value(spec, u);
        EXPECT_LE(J, spike_energy_bound(c, spec.lambda, t) + 1e-12 * (1 + std::abs(J)));
        if (J > spike_energy_bound_short_count(c, spec.lambda, t)) ++short_failures;
    }
    EXPECT_GT(short_failures, 0);
}

TEST(Bounds, HillBoundHoldsOnRandomInstances) {
    std::mt19937_64 rng(73);
    for (int k = 0; k < 200; ++k) {
        auto spec = pt::random_problem(rng);
        const auto c = instance_constants(spec);
        const double xi = std::pow(2.0, pt::uniform_int(rng, 0, 4));
        Eigen::VectorXd u = Eigen::VectorXd::Zero(spec.graph.size());
        u.head(spec.graph.interior_size()).setConstant(xi);
        const double J = energy_value(spec, u);
        EXPECT_LE(J, hill_energy_bound(c, spec.lambda, xi) + 1e-12 * (1 + std::abs(J)));
    }
}

TEST(Bounds, ThresholdsRecord) {
    const auto c = example_constants(pt::example_m_linear());
    const auto t = lambda_thresholds(c, 14.7, 1e-4);
    EXPECT_EQ(t.lambda2, lambda2(c));
    EXPECT_EQ(t.gamma0, gamma0(c));
    ASSERT_TRUE(t.lambda3.has_value());
    EXPECT_EQ(*t.lambda3, lambda3(c, 14.7));
    ASSERT_TRUE(t.t0.has_value());
    EXPECT_EQ(*t.t0, t0(c, 1e-4));
}
