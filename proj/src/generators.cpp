#include "gsc/generators.hpp"

#include <cmath>
#include <random>

#include "gsc/errors.hpp"
#include "gsc/rng.hpp"

namespace gsc {

namespace {

Eigen::MatrixXd sample_small_world(int n, int k_half, double q, std::mt19937_64& rng) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int d = 1; d <= k_half; ++d) {
            int j = (i + d) % n;
            w(i, j) = 1.0;
            w(j, i) = 1.0;
        }
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> node(0, n - 1);
    // Standard Watts-Strogatz pass: each clockwise lattice edge (i, i+d) may be
    // rewired to (i, t) for a fresh target t that is neither i nor an existing
    // neighbor of i.
    for (int d = 1; d <= k_half; ++d) {
        for (int i = 0; i < n; ++i) {
            int j = (i + d) % n;
            if (coin(rng) >= q) continue;
            if (w(i, j) == 0.0) continue;  // already rewired away by an earlier pass
            // Skip saturated nodes: no valid fresh target exists.
            bool saturated = true;
            for (int t = 0; t < n; ++t) {
                if (t != i && w(i, t) == 0.0) {
                    saturated = false;
                    break;
                }
            }
            if (saturated) continue;
            int t = node(rng);
            while (t == i || w(i, t) != 0.0) t = node(rng);
            w(i, j) = 0.0;
            w(j, i) = 0.0;
            w(i, t) = 1.0;
            w(t, i) = 1.0;
        }
    }
    return w;
}

} // namespace

Graph generate_small_world(int n, double p_edge, double q_rewire, std::uint64_t seed,
                           int max_attempts) {
    if (n < 3) throw DimensionMismatchError("small-world graph needs n >= 3");
    if (p_edge <= 0.0 || p_edge > 1.0 || q_rewire < 0.0 || q_rewire > 1.0) {
        throw DataError("small-world parameters out of range");
    }
    // Lattice degree: round(p_edge * (n-1)) rounded to the nearest even value.
    int k_half = static_cast<int>(std::lround(p_edge * (n - 1) / 2.0));
    if (k_half < 1) k_half = 1;
    if (2 * k_half >= n) k_half = (n - 1) / 2;

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        Graph g = Graph::from_weights(sample_small_world(n, k_half, q_rewire, rng));
        if (g.is_connected()) return g;
    }
    throw ConnectivityRetryExhaustedError("no connected small-world graph in " +
                                          std::to_string(max_attempts) + " attempts");
}

TwoCommunityGraph generate_two_community(int n, double p_in, double p_out, std::uint64_t seed,
                                         int max_attempts) {
    if (n < 4 || n % 2 != 0) throw DimensionMismatchError("two-community graph needs even n >= 4");
    if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0) {
        throw DataError("block probabilities out of range");
    }
    const int half = n / 2;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double p = ((i < half) == (j < half)) ? p_in : p_out;
                if (coin(rng) < p) {
                    w(i, j) = 1.0;
                    w(j, i) = 1.0;
                }
            }
        }
        Graph g = Graph::from_weights(std::move(w));
        if (g.is_connected()) {
            TwoCommunityGraph out;
            out.graph = std::move(g);
            out.communities.assign(n, 0);
            for (int i = half; i < n; ++i) out.communities[i] = 1;
            return out;
        }
    }
    throw ConnectivityRetryExhaustedError("no connected two-community graph in " +
                                          std::to_string(max_attempts) + " attempts");
}

} // namespace gsc
