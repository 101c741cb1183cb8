#include <gtest/gtest.h>

#include "support.hpp"

using namespace plap;
using plap::testing::example_graph;
using plap::testing::path_graph;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Usage;
}

} // namespace

TEST(Graph, ExampleGraphIsValid) {
    Graph g = example_graph();
    EXPECT_EQ(g.size(), 6);
    EXPECT_TRUE(validate_graph(g).ok());
}

TEST(Graph, PathGraphIsValid) {
    Graph g = path_graph();
    EXPECT_EQ(g.size(), 3);
    EXPECT_EQ(g.index_of("v1"), 0);
    EXPECT_TRUE(validate_graph(g).ok());
}

TEST(Graph, WeightsStoredSymmetrically) {
    Graph g = build_graph({"a", "b"}, {"c"}, {{"a", "b", 2.0}, {"c", "b", 0.5}});
    const auto& w = g.weights();
    EXPECT_TRUE(w.isApprox(w.transpose()));
    EXPECT_EQ(w(g.index_of("c"), g.index_of("b")), 0.5);
    EXPECT_EQ(w(g.index_of("b"), g.index_of("c")), 0.5);
    EXPECT_EQ(w.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Graph, BuildErrors) {
    EXPECT_EQ(code_of([] { build_graph({"x1", "x2"}, {"x3"}, {{"x1", "x2", -0.5}, {"x2", "x3", 1}}); }),
              ErrorCode::NonPositiveWeight);
    EXPECT_EQ(code_of([] { build_graph({"x1"}, {"x2"}, {{"x1", "x1", 1}}); }), ErrorCode::SelfLoop);
    EXPECT_EQ(code_of([] { build_graph({"x1"}, {"x2"}, {{"x1", "y", 1}}); }), ErrorCode::UnknownEndpoint);
    EXPECT_EQ(code_of([] { build_graph({"x1", "x1"}, {"x2"}, {}); }), ErrorCode::DuplicateVertex);
    EXPECT_EQ(code_of([] { build_graph({"x1"}, {"x1"}, {}); }), ErrorCode::OverlappingSets);
    EXPECT_EQ(code_of([] { build_graph({}, {"x1"}, {}); }), ErrorCode::EmptySet);
    EXPECT_EQ(code_of([] { build_graph({"x1"}, {}, {}); }), ErrorCode::EmptySet);
    EXPECT_EQ(code_of([] { build_graph({"x1", "x2"}, {"x3"}, {{"x1", "x3", 1}}); }), ErrorCode::Disconnected);
    EXPECT_EQ(code_of([] { build_graph({"x1"}, {"x2"}, {{"x1", "x2", 1}, {"x2", "x1", 2}}); }),
              ErrorCode::DuplicateEdge);
    EXPECT_EQ(code_of([] { path_graph().index_of("nope"); }), ErrorCode::UnknownVertex);
}

TEST(Graph, ValidateFlagsIsolatedVertex) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
    w(0, 1) = w(1, 0) = 1;
    auto g = Graph::unchecked({"a", "b"}, {"c"}, w);
    auto r = validate_graph(g);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(r.flagged("Connected"));
    EXPECT_FALSE(r.flagged("Symmetry"));
}

TEST(Graph, ValidateFlagsAsymmetry) {
    Graph ok = path_graph();
    Eigen::MatrixXd w = ok.weights();
    w(0, 1) = 2.0;
    auto g = Graph::unchecked({"v1"}, {"v0", "v2"}, w);
    auto r = validate_graph(g);
    EXPECT_TRUE(r.flagged("Symmetry"));
}

TEST(Graph, SummaryOfExampleGraph) {
    auto s = graph_summary(example_graph());
    EXPECT_EQ(s.n_interior, 3);
    EXPECT_EQ(s.n_boundary, 3);
    EXPECT_EQ(s.n_total, 6);
    EXPECT_EQ(s.omega_max, 1.0);
    EXPECT_EQ(s.degree[0], 3);
    EXPECT_EQ(graph_summary(example_graph(2.5)).omega_max, 2.5);
}

TEST(Graph, SummaryOfPath) {
    auto s = graph_summary(path_graph());
    EXPECT_EQ(s.n_interior, 1);
    EXPECT_EQ(s.n_boundary, 2);
    EXPECT_EQ(s.n_total, 3);
    EXPECT_EQ(s.omega_max, 1.0);
    EXPECT_EQ(s.degree[0], 2);
}

TEST(Graph, RandomBuildsAlwaysValidate) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const Index ns = plap::testing::uniform_int(rng, 1, 8), nb = plap::testing::uniform_int(rng, 1, 4);
        Graph g = plap::testing::random_graph(rng, ns, nb);
        ASSERT_TRUE(validate_graph(g).ok());
        auto s = graph_summary(g);
        EXPECT_EQ(s.n_interior, ns);
        EXPECT_EQ(s.n_boundary, nb);
        EXPECT_EQ(s.n_total, ns + nb);
        EXPECT_TRUE((g.weights().array() >= 0).all());
    }
}
