#include <doctest.h>

#include <cmath>
#include <random>

#include "gsc/errors.hpp"
#include "gsc/perturbation.hpp"
#include "gsc/shift.hpp"
#include "gsc/wavelets.hpp"
#include "helpers.hpp"

using namespace gsc;

namespace {

ErrorMatrix diag_error(std::vector<double> entries) {
    ErrorMatrix e;
    e.diag = Eigen::Map<Eigen::VectorXd>(entries.data(), entries.size());
    e.eps = 2.0 * e.spectral_norm();
    e.structural = structural_constraint(e);
    return e;
}

/// Closed forms for sum_{l=0}^{L-1} l^r a^l, a != 1 (independent oracle).
double xi_closed(int r, double a, int L) {
    const double aL = std::pow(a, L);
    const double d = 1.0 - a;
    switch (r) {
        case 0:
            return (1.0 - aL) / d;
        case 1:
            return a * (1.0 - L * std::pow(a, L - 1) + (L - 1) * aL) / (d * d);
        case 2:
            return a *
                   ((1.0 + a) - double(L) * L * std::pow(a, L - 1) +
                    (2.0 * L * L - 2.0 * L - 1.0) * aL -
                    double(L - 1) * (L - 1) * std::pow(a, L + 1)) /
                   (d * d * d);
        default:
            return 0.0;
    }
}

} // namespace

TEST_CASE("dilation errors have exact spectral norm eps/2") {
    for (double eps : {0.05, 0.3, 1.0, 1.9}) {
        for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
            ErrorMatrix e = dilation_error(50, eps, seed);
            CHECK(std::abs(e.spectral_norm() - eps / 2.0) <= 1e-12);
            CHECK(e.eps == doctest::Approx(eps));
            CHECK(e.structural <= eps + 1e-12);
        }
    }
    // determinism
    ErrorMatrix a = dilation_error(30, 0.4, 9);
    ErrorMatrix b = dilation_error(30, 0.4, 9);
    CHECK((a.diag - b.diag).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(dilation_error(10, 0.0, 1), InfeasibleEpsError);
    CHECK_THROWS_AS(dilation_error(10, 2.0, 1), InfeasibleEpsError);
    CHECK_THROWS_AS(dilation_error(10, -0.1, 1), InfeasibleEpsError);
}

TEST_CASE("dilation structural constraint shrinks with eps") {
    ErrorMatrix e = dilation_error(100, 0.5, 7);
    CHECK(e.structural <= 0.5);
    ErrorMatrix tiny = dilation_error(100, 0.01, 7);
    CHECK(tiny.structural <= 0.011);  // near-uniform direction as eps -> 0
}

TEST_CASE("structural constraint closed-form cases") {
    CHECK(structural_constraint(diag_error({0.3, 0.3, 0.3})) == doctest::Approx(0.0));
    CHECK(structural_constraint(diag_error({1.0, -1.0})) == doctest::Approx(2.0));
    CHECK(structural_constraint(diag_error({1.0, 1.1})) ==
          doctest::Approx(0.1 / 1.1).epsilon(1e-12));
    ErrorMatrix zero;
    zero.diag = Eigen::VectorXd::Zero(4);
    CHECK(structural_constraint(zero) == 0.0);
}

TEST_CASE("adjacency perturbation is the entrywise dilation model") {
    Graph g = testutil::small_world(20, 33);

    SUBCASE("zero error leaves the graph bit-exactly unchanged") {
        ErrorMatrix zero;
        zero.diag = Eigen::VectorXd::Zero(20);
        PerturbedGraph pg = perturb_adjacency(g, zero);
        CHECK((pg.graph.weights() - g.weights()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(pg.clamped_edges == 0);
    }

    SUBCASE("uniform error scales all weights by 1 + 2c") {
        ErrorMatrix e = diag_error(std::vector<double>(20, 0.05));
        PerturbedGraph pg = perturb_adjacency(g, e);
        CHECK((pg.graph.weights() - 1.1 * g.weights()).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("single-node error dilates only incident edges") {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
        w(0, 1) = w(1, 0) = 1.0;
        w(1, 2) = w(2, 1) = 1.0;
        Graph path = Graph::from_weights(w);
        ErrorMatrix e = diag_error({0.1, 0.0, 0.0});
        PerturbedGraph pg = perturb_adjacency(path, e);
        CHECK(pg.graph.weights()(0, 1) == doctest::Approx(1.1).epsilon(1e-12));
        CHECK(pg.graph.weights()(1, 2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(pg.graph.weights()(0, 2) == 0.0);
    }

    SUBCASE("strongly negative errors clamp at zero and report it") {
        ErrorMatrix e = diag_error(std::vector<double>(20, -0.8));
        PerturbedGraph pg = perturb_adjacency(g, e);  // weights * (1 - 1.6) < 0
        CHECK(pg.graph.weights().maxCoeff() == 0.0);
        CHECK(pg.clamped_edges == g.edge_count());
    }
}

TEST_CASE("operator perturbation matches the adjacency protocol on adjacency shifts") {
    Graph g = testutil::small_world(15, 41);
    ShiftOperator s = build_shift(g, ShiftVariant::Adjacency);
    ErrorMatrix e = dilation_error(15, 0.2, 3);

    ShiftOperator hat = perturb_shift(s, e);
    PerturbedGraph pg = perturb_adjacency(g, e);
    CHECK((hat.matrix() - pg.graph.weights()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(hat.variant() == s.variant());

    ErrorMatrix zero;
    zero.diag = Eigen::VectorXd::Zero(15);
    CHECK((perturb_shift(s, zero).matrix() - s.matrix()).cwiseAbs().maxCoeff() == 0.0);

    ErrorMatrix wrong;
    wrong.diag = Eigen::VectorXd::Zero(14);
    CHECK_THROWS_AS(perturb_shift(s, wrong), DimensionMismatchError);
    CHECK_THROWS_AS(perturb_adjacency(g, wrong), DimensionMismatchError);
}

TEST_CASE("edge dropping") {
    Graph g = testutil::small_world(40, 53);

    SUBCASE("p = 0 keeps every edge") {
        EdgeDropResult r = edge_drop(g, 0.0, 1);
        CHECK((r.graph.weights() - g.weights()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(r.dropped_edges == 0);
    }

    SUBCASE("p = 1 clears the edge set") {
        EdgeDropResult r = edge_drop(g, 1.0, 1);
        CHECK(r.graph.weights().cwiseAbs().maxCoeff() == 0.0);
        CHECK(r.dropped_edges == g.edge_count());
    }

    SUBCASE("survival fraction concentrates at 1 - p") {
        const double p = 0.3;
        const std::int64_t total = g.edge_count();
        double kept = 0.0;
        const int trials = 2000;
        for (int t = 0; t < trials; ++t) {
            kept += double(total - edge_drop(g, p, 1000 + t).dropped_edges) / double(total);
        }
        CHECK(kept / trials == doctest::Approx(0.7).epsilon(0.015));
    }

    SUBCASE("identical seeds drop identical edges") {
        EdgeDropResult a = edge_drop(g, 0.4, 99);
        EdgeDropResult b = edge_drop(g, 0.4, 99);
        CHECK((a.graph.weights() - b.graph.weights()).cwiseAbs().maxCoeff() == 0.0);
    }

    CHECK_THROWS_AS(edge_drop(g, -0.1, 1), DataError);
    CHECK_THROWS_AS(edge_drop(g, 1.5, 1), DataError);
}

TEST_CASE("relative distance between operators") {
    Graph g = testutil::small_world(6, 61);
    ShiftOperator s = build_shift(g, ShiftVariant::Adjacency);

    SUBCASE("identical operators are at distance zero") {
        RelativeDistanceResult r = relative_distance(s, s);
        CHECK(r.value <= 1e-12);
        CHECK(r.residual <= 1e-10);
    }

    SUBCASE("a relabeled operator is at distance ~0 under exact search") {
        std::vector<int> p = testutil::random_permutation(6, 5);
        ShiftOperator sp = shift_from_matrix(apply_permutation(s.matrix(), p), s.variant());
        RelativeDistanceResult r = relative_distance(s, sp, true);
        CHECK(r.exact);
        CHECK(r.value <= 1e-9);
    }

    SUBCASE("a known feasible dilation bounds the minimum") {
        ErrorMatrix e = diag_error(std::vector<double>(6, 0.05));  // ||E|| = 0.05
        ShiftOperator hat = perturb_shift(s, e);
        RelativeDistanceResult r = relative_distance(s, hat);
        CHECK(r.value <= 0.05 + 1e-9);
        CHECK(r.residual <= 1e-8);
    }

    SUBCASE("exact search caps at n = 8") {
        Graph big = testutil::small_world(9, 3);
        ShiftOperator sb = build_shift(big, ShiftVariant::Adjacency);
        CHECK_THROWS_AS(relative_distance(sb, sb, true), TooLargeForExactError);
        CHECK_NOTHROW(relative_distance(sb, sb, false));
    }

    SUBCASE("operators of different sizes are rejected") {
        ShiftOperator other = build_shift(testutil::small_world(5, 3), ShiftVariant::Adjacency);
        CHECK_THROWS_AS(relative_distance(s, other), DimensionMismatchError);
    }
}

TEST_CASE("geometric layer sums match the closed forms") {
    for (double B : {0.9, 1.1, 2.0}) {
        for (int J : {2, 6}) {
            for (int L : {2, 3, 4}) {
                const double a = B * B * J;
                for (int r : {0, 1, 2}) {
                    double direct = xi_sum(r, B, J, L);
                    double closed = xi_closed(r, a, L);
                    CHECK(direct == doctest::Approx(closed).epsilon(1e-9));
                }
            }
        }
    }
    // the degenerate ratio a = 1 is handled by direct summation
    CHECK(xi_sum(0, 1.0, 1, 5) == doctest::Approx(5.0));
    CHECK(xi_sum(2, 1.0, 1, 3) == doctest::Approx(5.0));  // 0 + 1 + 4
}

TEST_CASE("stability bounds: special values and monotonicity") {
    CHECK(stability_bound(0.0, 2.0, 1.1, 6, 3) == doctest::Approx(0.0));
    CHECK(stability_bound(1.0, 1.0, 1.0, 1, 3) == doctest::Approx(std::sqrt(5.0)));

    // linear in eps
    double b1 = stability_bound(0.05, 2.0, 1.05, 6, 3);
    double b2 = stability_bound(0.10, 2.0, 1.05, 6, 3);
    CHECK(b2 == doctest::Approx(2.0 * b1).epsilon(1e-12));

    // increasing in eps, C, and L
    CHECK(stability_bound(0.2, 2.0, 1.05, 6, 3) > b2);
    CHECK(stability_bound(0.1, 3.0, 1.05, 6, 3) > b2);
    CHECK(stability_bound(0.1, 2.0, 1.05, 6, 4) > b2);

    // aggregator-perturbation terms: eps_U alone gives sqrt(xi0) * eps_U
    double xi0 = xi_sum(0, 1.05, 6, 3);
    CHECK(stability_bound(0.0, 2.0, 1.05, 6, 3, 1.0, 0.25) ==
          doctest::Approx(0.25 * std::sqrt(xi0)));
}

TEST_CASE("per-layer coefficient bounds") {
    // no filterings at layer 0: only the aggregator deviation term remains
    CHECK(coefficient_bound(0.3, 2.0, 1.1, 0) == doctest::Approx(0.0));
    CHECK(coefficient_bound(0.3, 2.0, 1.1, 0, 1.0, 0.1) == doctest::Approx(0.1));
    // layer 1: eps C
    CHECK(coefficient_bound(0.25, 2.0, 1.1, 1) == doctest::Approx(0.5));
    // layer 2: eps C * 2 * B
    CHECK(coefficient_bound(0.25, 2.0, 1.1, 2) == doctest::Approx(0.5 * 2.0 * 1.1));
}

TEST_CASE("wavelet output differences against the integral Lipschitz budget") {
    Graph g = testutil::small_world(40, 71);
    ShiftOperator s = build_shift(g, ShiftVariant::NormalizedLaplacian);
    WaveletBank bank = monic_cubic_bank(s, 5);
    const double C = bank.lipschitz();

    SUBCASE("identical banks differ by nothing") {
        OperatorDifference d = wavelet_output_difference(bank, bank, 2, 5, 1);
        CHECK(d.exact <= 1e-12);
        CHECK(d.monte_carlo <= d.exact + 1e-10);
    }

    SUBCASE("dilation sweep stays within eps C plus quadratic slack") {
        for (double eps : {0.05, 0.1, 0.2}) {
            ErrorMatrix e = dilation_error(40, eps, 17);
            ShiftOperator hat = perturb_shift(s, e);
            WaveletBank bank_hat = reinstantiate(bank, hat);
            for (int j = 1; j <= 5; ++j) {
                OperatorDifference d = wavelet_output_difference(bank, bank_hat, j, 5, 2);
                CHECK(d.monte_carlo <= d.exact + 1e-10);
                CHECK(d.exact <= eps * C + 0.5 * (eps * C) * (eps * C));
            }
        }
    }

    SUBCASE("banks of different shape are rejected") {
        WaveletBank other = monic_cubic_bank(s, 4);
        CHECK_THROWS_AS(wavelet_output_difference(bank, other, 1, 3, 1),
                        ConfigMismatchError);
        WaveletBank hann = tight_hann_bank(s, 5);
        CHECK_THROWS_AS(wavelet_output_difference(bank, hann, 1, 3, 1),
                        ConfigMismatchError);
        CHECK_THROWS_AS(wavelet_output_difference(bank, bank, 6, 3, 1),
                        ScaleOutOfRangeError);
    }
}
