#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsc/graph.hpp"
#include "gsc/wavelets.hpp"

namespace gsc {

/// A path is the sequence of scale indices (1-based) applied before
/// aggregation; the empty path is the raw signal's aggregate.
using Path = std::vector<int>;

enum class AggregatorKind { Mean, DegreeWeighted };

std::string to_string(AggregatorKind k);

/// Low-pass aggregation functional U: a row vector applied to each scattered
/// signal. Mean uses 1/N with operator-norm bound 1; DegreeWeighted uses
/// d/||d||_1 with its exact operator norm as the bound.
struct Aggregator {
    AggregatorKind kind = AggregatorKind::Mean;
    Eigen::VectorXd weights;
    double norm_bound = 1.0;  // B_U

    double apply(const Eigen::VectorXd& x) const { return weights.dot(x); }
};

Aggregator make_mean_aggregator(int n);
Aggregator make_degree_aggregator(const Graph& g);

/// ||U(S) - U(S^)||: Euclidean distance of the aggregation weight vectors
/// (the epsilon_U term of the generalized stability bound).
double aggregator_distance(const Aggregator& a, const Aggregator& b);

/// Total number of paths with at most max_len-1 filterings: (J^L - 1)/(J - 1).
/// Throws PathBudgetExceededError beyond the budget.
std::int64_t path_count(int J, int L, std::int64_t budget = 1000000);

/// All paths in layer-major, lexicographic-within-layer order.
std::vector<Path> enumerate_paths(int J, int L, std::int64_t budget = 1000000);

struct ScatterConfig {
    int J = 0;
    int L = 0;
    WaveletFamily family = WaveletFamily::Diffusion;
    AggregatorKind aggregator = AggregatorKind::Mean;

    bool operator==(const ScatterConfig&) const = default;
};

/// The scattering representation: one coefficient per path, layer-major and
/// lexicographic within each layer.
struct ScatteringRep {
    ScatterConfig config;
    Eigen::VectorXd coefficients;

    std::int64_t index_of(const Path& p) const;
    Path path_at(std::int64_t index) const;
};

/// Breadth-first scattering transform: layer l holds |H_{j_l}| ... |H_{j_1} x|
/// for every scale tuple; each node contributes its aggregate. The layer
/// expansion runs across OpenMP threads; every output slot is written by
/// exactly one task, so results are bit-identical to scatter_serial.
ScatteringRep scatter(const WaveletBank& bank, const Aggregator& agg, const Eigen::VectorXd& x,
                      int L);

/// Single-threaded reference implementation (kept for testing and
/// benchmarking against the parallel kernel).
ScatteringRep scatter_serial(const WaveletBank& bank, const Aggregator& agg,
                             const Eigen::VectorXd& x, int L);

/// Batched scattering of the columns of X: one GEMM per (layer node, scale)
/// instead of per-signal matrix-vector products. Row p of the result holds
/// coefficient p of every signal.
Eigen::MatrixXd scatter_batch(const WaveletBank& bank, const Aggregator& agg,
                              const Eigen::MatrixXd& x, int L);

/// Squared Euclidean norm of the coefficient vector.
double rep_energy(const ScatteringRep& rep);

struct RepDistance {
    double absolute = 0.0;
    double relative = 0.0;  // absolute / ||a||, 0 when both representations vanish
};

/// Distance between two representations of identical configuration
/// (ConfigMismatchError otherwise).
RepDistance rep_distance(const ScatteringRep& a, const ScatteringRep& b);

/// CSV dump `path,coefficient` with dash-joined scale tuples; the empty path
/// is written as `0`.
void save_rep_csv(const ScatteringRep& rep, const std::string& path);

} // namespace gsc
