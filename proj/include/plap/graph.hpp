#pragma once

#include <Eigen/Dense>

#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "plap/error.hpp"

namespace plap {

using Index = Eigen::Index;

struct EdgeSpec {
    std::string u;
    std::string v;
    double w;
};

/// Finite weighted graph on S̄ = S ∪ ∂S.
///
/// Vertices are indexed interior first, then boundary, each in insertion order,
/// so interior index i coincides with global index i. Vertex functions are
/// Eigen vectors of length size().
class Graph {
public:
    Graph() = default;

    /// Bypasses validation. Used to exercise validate_graph on broken inputs.
    static Graph unchecked(std::vector<std::string> interior, std::vector<std::string> boundary,
                           Eigen::MatrixXd weights);

    Index interior_size() const { return n_interior_; }
    Index boundary_size() const { return size() - n_interior_; }
    Index size() const { return static_cast<Index>(labels_.size()); }

    bool is_interior(Index i) const { return i < n_interior_; }

    const std::string& label(Index i) const { return labels_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Throws UnknownVertex.
    Index index_of(const std::string& label) const;
    bool contains(const std::string& label) const { return index_.count(label) != 0; }

    const Eigen::MatrixXd& weights() const { return w_; }
    double weight(Index x, Index y) const { return w_(x, y); }

    /// Positive-weight neighbours of x in ascending index order.
    const std::vector<Index>& neighbors(Index x) const {
        return adj_.at(static_cast<std::size_t>(x));
    }

    /// Edges as (x, y, w) with x < y, in row-major order.
    std::vector<std::tuple<Index, Index, double>> edges() const;

private:
    friend Graph build_graph(const std::vector<std::string>&, const std::vector<std::string>&,
                             const std::vector<EdgeSpec>&);
    void rebuild_index();

    std::vector<std::string> labels_;
    std::unordered_map<std::string, Index> index_;
    Index n_interior_ = 0;
    Eigen::MatrixXd w_;
    std::vector<std::vector<Index>> adj_;
};

/// Throws DuplicateVertex, UnknownEndpoint, NonPositiveWeight, SelfLoop,
/// OverlappingSets, EmptySet, Disconnected, DuplicateEdge.
Graph build_graph(const std::vector<std::string>& interior, const std::vector<std::string>& boundary,
                  const std::vector<EdgeSpec>& edges);

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool ok() const;
    bool flagged(const std::string& name) const;
};

ValidationReport validate_graph(const Graph& g);

struct GraphSummary {
    Index n_interior;
    Index n_boundary;
    Index n_total;
    double omega_max;
    std::vector<Index> degree;
};

GraphSummary graph_summary(const Graph& g);

} // namespace plap
