#pragma once

#include <cstdint>
#include <vector>

#include "gsc/graph.hpp"

namespace gsc {

/// Watts-Strogatz small-world graph. Starts from a ring lattice of even
/// degree k = round(p_edge * (n-1)) and rewires each lattice edge with
/// probability q_rewire. Resamples with a derived sub-seed until connected
/// (at most max_attempts, then ConnectivityRetryExhaustedError).
Graph generate_small_world(int n, double p_edge, double q_rewire, std::uint64_t seed,
                           int max_attempts = 100);

struct TwoCommunityGraph {
    Graph graph;
    std::vector<int> communities;  // 0 for the first n/2 nodes, 1 for the rest
};

/// Two-community stochastic block model with balanced communities: an edge
/// appears with probability p_in inside a community and p_out across. n must
/// be even. Resamples with a derived sub-seed until connected.
TwoCommunityGraph generate_two_community(int n, double p_in, double p_out, std::uint64_t seed,
                                         int max_attempts = 100);

} // namespace gsc
