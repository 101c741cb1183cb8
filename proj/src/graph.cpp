#include "plap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <tuple>

namespace plap {

namespace {

std::vector<Index> bfs_reach(const Eigen::MatrixXd& w) {
    const Index n = w.rows();
    std::vector<Index> seen(static_cast<std::size_t>(n), 0);
    if (n == 0) return seen;
    std::deque<Index> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        Index x = queue.front();
        queue.pop_front();
        for (Index y = 0; y < n; ++y) {
            if (w(x, y) > 0.0 && !seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                queue.push_back(y);
            }
        }
    }
    return seen;
}

} // namespace

void Graph::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], static_cast<Index>(i));
    adj_.assign(labels_.size(), {});
    for (Index x = 0; x < w_.rows(); ++x)
        for (Index y = 0; y < w_.cols(); ++y)
            if (w_(x, y) > 0.0) adj_[static_cast<std::size_t>(x)].push_back(y);
}

Graph Graph::unchecked(std::vector<std::string> interior, std::vector<std::string> boundary,
                       Eigen::MatrixXd weights) {
    Graph g;
    g.n_interior_ = static_cast<Index>(interior.size());
    g.labels_ = std::move(interior);
    g.labels_.insert(g.labels_.end(), boundary.begin(), boundary.end());
    g.w_ = std::move(weights);
    g.rebuild_index();
    return g;
}

Index Graph::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw Error(ErrorCode::UnknownVertex, "no vertex '" + label + "'");
    return it->second;
}

std::vector<std::tuple<Index, Index, double>> Graph::edges() const {
    std::vector<std::tuple<Index, Index, double>> out;
    for (Index x = 0; x < size(); ++x)
        for (Index y = x + 1; y < size(); ++y)
            if (w_(x, y) > 0.0) out.emplace_back(x, y, w_(x, y));
    return out;
}

Graph build_graph(const std::vector<std::string>& interior, const std::vector<std::string>& boundary,
                  const std::vector<EdgeSpec>& edges) {
    if (interior.empty()) throw Error(ErrorCode::EmptySet, "interior set S is empty");
    if (boundary.empty()) throw Error(ErrorCode::EmptySet, "boundary set ∂S is empty");

    std::set<std::string> s_set, b_set;
    for (const auto& v : interior) {
        if (v.empty()) throw Error(ErrorCode::InvariantError, "empty vertex label");
        if (!s_set.insert(v).second) throw Error(ErrorCode::DuplicateVertex, v);
    }
    for (const auto& v : boundary) {
        if (v.empty()) throw Error(ErrorCode::InvariantError, "empty vertex label");
        if (s_set.count(v)) throw Error(ErrorCode::OverlappingSets, v + " is in both S and ∂S");
        if (!b_set.insert(v).second) throw Error(ErrorCode::DuplicateVertex, v);
    }

    Graph g;
    g.n_interior_ = static_cast<Index>(interior.size());
    g.labels_ = interior;
    g.labels_.insert(g.labels_.end(), boundary.begin(), boundary.end());
    for (std::size_t i = 0; i < g.labels_.size(); ++i) g.index_.emplace(g.labels_[i], static_cast<Index>(i));

    const Index n = g.size();
    g.w_ = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges) {
        auto iu = g.index_.find(e.u);
        auto iv = g.index_.find(e.v);
        if (iu == g.index_.end()) throw Error(ErrorCode::UnknownEndpoint, e.u);
        if (iv == g.index_.end()) throw Error(ErrorCode::UnknownEndpoint, e.v);
        if (iu->second == iv->second) throw Error(ErrorCode::SelfLoop, e.u);
        if (!(e.w > 0.0) || !std::isfinite(e.w)) {
            std::ostringstream os;
            os << "edge (" << e.u << "," << e.v << ") has weight " << e.w;
            throw Error(ErrorCode::NonPositiveWeight, os.str());
        }
        if (g.w_(iu->second, iv->second) != 0.0)
            throw Error(ErrorCode::DuplicateEdge, "(" + e.u + "," + e.v + ")");
        g.w_(iu->second, iv->second) = e.w;
        g.w_(iv->second, iu->second) = e.w;
    }

    auto seen = bfs_reach(g.w_);
    for (Index i = 0; i < n; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw Error(ErrorCode::Disconnected, "vertex " + g.labels_[static_cast<std::size_t>(i)] +
                                                     " is unreachable");
    g.rebuild_index();
    return g;
}

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

bool ValidationReport::flagged(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name && !c.passed) return true;
    return false;
}

ValidationReport validate_graph(const Graph& g) {
    ValidationReport r;
    const auto& w = g.weights();
    const Index n = g.size();

    r.checks.push_back({"NonemptyInterior", g.interior_size() > 0, ""});
    r.checks.push_back({"NonemptyBoundary", g.boundary_size() > 0, ""});

    std::set<std::string> seen;
    std::string dup;
    for (const auto& l : g.labels())
        if (!seen.insert(l).second) dup = l;
    r.checks.push_back({"UniqueLabels", dup.empty(), dup});

    bool shape = w.rows() == n && w.cols() == n;
    r.checks.push_back({"Shape", shape, shape ? "" : "weight matrix does not match vertex count"});
    if (!shape) return r;

    std::string sym, diag, sign;
    for (Index x = 0; x < n; ++x) {
        if (w(x, x) != 0.0 && diag.empty()) diag = g.label(x);
        for (Index y = 0; y < n; ++y) {
            if (w(x, y) != w(y, x) && sym.empty()) sym = "(" + g.label(x) + "," + g.label(y) + ")";
            if ((!(w(x, y) >= 0.0) || !std::isfinite(w(x, y))) && sign.empty())
                sign = "(" + g.label(x) + "," + g.label(y) + ")";
        }
    }
    r.checks.push_back({"Symmetry", sym.empty(), sym});
    r.checks.push_back({"NoSelfLoops", diag.empty(), diag});
    r.checks.push_back({"Nonnegative", sign.empty(), sign});

    auto reach = bfs_reach(w);
    std::string lost;
    for (Index i = 0; i < n; ++i)
        if (!reach[static_cast<std::size_t>(i)] && lost.empty()) lost = g.label(i);
    r.checks.push_back({"Connected", lost.empty(), lost});
    return r;
}

GraphSummary graph_summary(const Graph& g) {
    GraphSummary s;
    s.n_interior = g.interior_size();
    s.n_boundary = g.boundary_size();
    s.n_total = g.size();
    s.omega_max = g.size() > 0 ? g.weights().maxCoeff() : 0.0;
    s.degree.resize(static_cast<std::size_t>(g.size()));
    for (Index x = 0; x < g.size(); ++x)
        s.degree[static_cast<std::size_t>(x)] = static_cast<Index>(g.neighbors(x).size());
    return s;
}

} // namespace plap
