#include "gsc/graph.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "gsc/errors.hpp"

namespace gsc {

Graph Graph::from_weights(Eigen::MatrixXd weights, std::vector<std::string> labels) {
    if (weights.rows() != weights.cols()) {
        throw DimensionMismatchError("weight matrix must be square");
    }
    const int n = static_cast<int>(weights.rows());
    for (int i = 0; i < n; ++i) {
        if (weights(i, i) != 0.0) {
            throw NonzeroDiagonalError("self-loops are not allowed (nonzero diagonal at node " +
                                       std::to_string(i) + ")");
        }
        for (int j = i + 1; j < n; ++j) {
            if (weights(i, j) != weights(j, i)) {
                throw AsymmetricInputError("weight matrix is not symmetric at (" +
                                           std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (weights(i, j) < 0.0) {
                throw NegativeWeightError("negative weight at (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
            }
        }
    }
    if (!labels.empty() && static_cast<int>(labels.size()) != n) {
        throw DimensionMismatchError("label count does not match node count");
    }
    Graph g;
    g.w_ = std::move(weights);
    g.labels_ = std::move(labels);
    return g;
}

std::int64_t Graph::edge_count() const {
    std::int64_t m = 0;
    const int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (w_(i, j) != 0.0) ++m;
    return m;
}

std::vector<int> Graph::component_ids() const {
    const int n = size();
    std::vector<int> comp(n, -1);
    int next = 0;
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                if (w_(u, v) != 0.0 && comp[v] < 0) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

bool Graph::is_connected() const {
    if (size() == 0) return true;
    const std::vector<int> comp = component_ids();
    for (int c : comp)
        if (c != 0) return false;
    return true;
}

Graph Graph::subgraph(const std::vector<int>& nodes) const {
    const int m = static_cast<int>(nodes.size());
    Eigen::MatrixXd w(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) w(a, b) = w_(nodes[a], nodes[b]);
    std::vector<std::string> labels;
    if (has_labels()) {
        labels.reserve(m);
        for (int idx : nodes) labels.push_back(labels_[idx]);
    }
    return Graph::from_weights(std::move(w), std::move(labels));
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "#nodes " << g.size() << "\n";
    char buf[64];
    const Eigen::MatrixXd& w = g.weights();
    for (int i = 0; i < g.size(); ++i) {
        for (int j = i + 1; j < g.size(); ++j) {
            if (w(i, j) == 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%.17g", w(i, j));
            out << i << " " << j << " " << buf << "\n";
        }
    }
    if (!out) throw DataError("write failed for " + path);
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string header;
    std::getline(in, header);
    long long n = -1;
    if (std::sscanf(header.c_str(), "#nodes %lld", &n) != 1 || n < 0) {
        throw FileFormatError("missing `#nodes N` header in " + path);
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        long long i, j;
        double weight;
        if (!(ss >> i >> j >> weight)) {
            throw FileFormatError(path + ":" + std::to_string(lineno) + ": expected `i j w`");
        }
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw FileFormatError(path + ":" + std::to_string(lineno) + ": node index out of range");
        }
        if (i == j) {
            throw FileFormatError(path + ":" + std::to_string(lineno) + ": self-loop not allowed");
        }
        w(i, j) = weight;
        w(j, i) = weight;
    }
    return Graph::from_weights(std::move(w));
}

} // namespace gsc
