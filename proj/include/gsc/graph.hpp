#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gsc {

/// Undirected weighted graph. The weight matrix is symmetric, nonnegative,
/// with a zero diagonal (simple graph, no self-loops).
class Graph {
public:
    Graph() = default;

    /// Validates symmetry (within 0 tolerance: weights must match exactly),
    /// nonnegativity, and zero diagonal. Labels, when given, must have one
    /// entry per node.
    static Graph from_weights(Eigen::MatrixXd weights,
                              std::vector<std::string> labels = {});

    int size() const { return static_cast<int>(w_.rows()); }
    const Eigen::MatrixXd& weights() const { return w_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has_labels() const { return !labels_.empty(); }

    /// Weighted degree vector d_i = sum_j W_ij.
    Eigen::VectorXd degrees() const { return w_.rowwise().sum(); }

    /// Number of undirected edges with nonzero weight.
    std::int64_t edge_count() const;

    /// True when every node is reachable from node 0 (empty graph counts as
    /// connected).
    bool is_connected() const;

    /// Connected component id per node (ids ordered by lowest member index).
    std::vector<int> component_ids() const;

    /// Induced subgraph on the given (strictly increasing) node subset.
    Graph subgraph(const std::vector<int>& nodes) const;

private:
    Eigen::MatrixXd w_;
    std::vector<std::string> labels_;
};

/// Writes the edge-list format: a `#nodes N` header line, then one `i j w`
/// line per undirected edge (i < j), weights printed with 17 significant
/// digits so a read-back is bit-exact.
void save_edge_list(const Graph& g, const std::string& path);

/// Reads the edge-list format written by save_edge_list.
Graph load_edge_list(const std::string& path);

} // namespace gsc
