#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/shift.hpp"
#include "gsc/wavelets.hpp"
#include "helpers.hpp"

using namespace gsc;

namespace {

ShiftOperator diagonal_shift(std::vector<double> ev,
                             ShiftVariant variant = ShiftVariant::Adjacency) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ev.size(), ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) m(i, i) = ev[i];
    return shift_from_matrix(m, variant);
}

ShiftOperator small_world_nl(int n = 40, std::uint64_t seed = 5) {
    return build_shift(testutil::small_world(n, seed), ShiftVariant::NormalizedLaplacian);
}

/// Independent cubic-interior oracle for the x1=1, x2=2, alpha=beta=2 design.
double cubic_oracle(double x) { return -5.0 + 11.0 * x - 6.0 * x * x + x * x * x; }

} // namespace

TEST_CASE("monic cubic prototype: power tails and the interior cubic") {
    // Eigenvalues placed so the lower/upper spectral quartiles are exactly 1 and 2.
    ShiftOperator s = diagonal_shift({1.0, 1.5, 2.0, 3.0});
    const int J = 4;
    WaveletBank bank = monic_cubic_bank(s, J);

    // Band-pass scales are log-spaced from x2*k_ratio/lambda_max down to
    // x2/lambda_max; recompute them independently.
    const double t_hi = 2.0 * 20.0 / 3.0;
    const double t_lo = 2.0 / 3.0;
    for (int j = 2; j <= J; ++j) {
        const double t =
            std::exp(std::log(t_hi) + (std::log(t_lo) - std::log(t_hi)) * (j - 2) / double(J - 2));

        // interior: the cubic with matched values and slopes at both ends
        for (double x : {1.05, 1.3, 1.5, 1.8, 1.95}) {
            CHECK(bank.kernel(j).f(x / t) == doctest::Approx(cubic_oracle(x)).epsilon(1e-9));
        }
        // boundary conditions: value 1 at both quartiles
        CHECK(bank.kernel(j).f(1.0 / t) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(bank.kernel(j).f(2.0 / t) == doctest::Approx(1.0).epsilon(1e-12));
        // power rise below x1 and power decay above x2 (alpha = beta = 2)
        CHECK(bank.kernel(j).f(0.5 / t) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(bank.kernel(j).f(4.0 / t) == doctest::Approx(0.25).epsilon(1e-12));
        // first derivative is continuous across both joints; divide by the
        // prototype-coordinate step h (the lambda step is h/t, and the kernel
        // is the prototype evaluated at t*lambda)
        const double h = 1e-7;
        double left = (bank.kernel(j).f((1.0) / t) - bank.kernel(j).f((1.0 - h) / t)) / h;
        double right = (bank.kernel(j).f((1.0 + h) / t) - bank.kernel(j).f((1.0) / t)) / h;
        CHECK(left == doctest::Approx(right).epsilon(1e-4));
        CHECK(left == doctest::Approx(2.0).epsilon(1e-4));  // slope alpha/x1
    }
}

TEST_CASE("monic cubic bank rejects degenerate spectra") {
    CHECK_THROWS_AS(monic_cubic_bank(diagonal_shift({0.0, 0.0, 0.0, 1.0}), 4),
                    DegenerateSpectrumError);
    CHECK_THROWS_AS(monic_cubic_bank(diagonal_shift({1.0, 1.0, 1.0, 1.0}), 4),
                    DegenerateSpectrumError);
    CHECK_THROWS_AS(monic_cubic_bank(small_world_nl(), 1), InvalidBankParameterError);
}

TEST_CASE("monic cubic bank on a small-world normalized Laplacian") {
    WaveletBank bank = monic_cubic_bank(small_world_nl(), 6);
    CHECK(bank.scale_count() == 6);
    CHECK(bank.frame_bounds().lower > 0.0);
    CHECK(bank.frame_bounds().upper < 10.0);
    // the low-pass kernel at 0 matches the band-pass peak
    double peak = 0.0;
    Eigen::MatrixXd grid = kernel_grid(bank, 1000);
    for (int i = 0; i < grid.rows(); ++i)
        for (int j = 2; j <= 6; ++j) peak = std::max(peak, grid(i, j));
    CHECK(bank.kernel(1).f(0.0) == doctest::Approx(peak).epsilon(1e-9));
    // integral Lipschitz constant close to the power-tail slope alpha = 2
    // (the grid does not sample the joint exactly, so allow discretization slack)
    CHECK(bank.lipschitz() >= 1.9);
}

TEST_CASE("tight Hann bank is an exactly tight frame") {
    WaveletBank bank = tight_hann_bank(small_world_nl(60, 8), 6);
    CHECK(bank.scale_count() == 6);
    FrameBounds fb = bank.frame_bounds();
    CHECK(fb.upper / fb.lower <= 1.0 + 1e-6);
    // fully-overlapped interior: three half-overlapping Hann windows with
    // a0 = a1 = 1/2 stack to a constant energy of 9/8
    CHECK(fb.upper == doctest::Approx(std::sqrt(9.0 / 8.0)).epsilon(1e-9));

    // kernel energy is the same constant at every evaluation point
    const Spectrum& spec = bank.shift().spectrum();
    for (int i = 0; i < spec.eigenvalues.size(); ++i) {
        double g = 0.0;
        for (int j = 1; j <= 6; ++j) {
            double v = bank.kernel(j).f(spec.eigenvalues(i));
            g += v * v;
        }
        CHECK(g == doctest::Approx(9.0 / 8.0).epsilon(1e-9));
    }
    // kernel values at lambda_max are finite and nonnegative
    double lmax = spec.eigenvalues(spec.eigenvalues.size() - 1);
    for (int j = 1; j <= 6; ++j) {
        double v = bank.kernel(j).f(lmax);
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("tight Hann bank parameter validation") {
    CHECK_THROWS_AS(tight_hann_bank(small_world_nl(), 2, 3), InvalidBankParameterError);
    // disconnected graph: lambda_2 = 0 under the normalized Laplacian
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 4);
    w(0, 1) = w(1, 0) = 1.0;
    w(2, 3) = w(3, 2) = 1.0;
    ShiftOperator s = build_shift(Graph::from_weights(w), ShiftVariant::NormalizedLaplacian);
    // spectrum {0, 0, 2, 2}: the warped range collapses
    CHECK_THROWS_AS(tight_hann_bank(s, 4), DegenerateSpectrumError);
}

TEST_CASE("diffusion bank kernels match t^a (1 - t^a), a = 2^(j-1)") {
    ShiftOperator lazy = build_shift(testutil::small_world(30, 12), ShiftVariant::LazyDiffusion);
    WaveletBank bank = diffusion_bank(lazy, 4);
    for (int j = 1; j <= 4; ++j) {
        const double a = std::ldexp(1.0, j - 1);
        for (double t : {0.1, 0.35, 0.5, 0.75, 0.9, 1.0}) {
            double expect = std::pow(t, a) * (1.0 - std::pow(t, a));
            CHECK(bank.kernel(j).f(t) == doctest::Approx(expect).epsilon(1e-12));
        }
        CHECK(bank.kernel(j).f(1.0) == 0.0);
        CHECK(bank.kernel(j).f(0.0) == 0.0);
    }
    // j=1: max over [0,1] of |t h'(t)| = |t(1-2t)| is 1, attained at t=1
    CHECK(bank.lipschitz() >= 1.0 - 1e-6);

    // the diffusion family is defined on the lazy diffusion operator only
    ShiftOperator nl = small_world_nl(30, 12);
    CHECK_THROWS_AS(diffusion_bank(nl, 4), InvalidBankParameterError);

    // two-node unit edge: T is idempotent, so H_1 = T - T^2 = 0
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 1) = w(1, 0) = 1.0;
    WaveletBank two = diffusion_bank(
        build_shift(Graph::from_weights(w), ShiftVariant::LazyDiffusion), 2);
    CHECK(two.filter(1).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("filter matrices are symmetric and spectrally correct") {
    ShiftOperator s = small_world_nl(20, 44);
    for (const WaveletBank& bank :
         {monic_cubic_bank(s, 5), tight_hann_bank(s, 5),
          diffusion_bank(build_shift(testutil::small_world(20, 44),
                                     ShiftVariant::LazyDiffusion), 5)}) {
        const Spectrum& spec = bank.shift().spectrum();
        for (int j = 1; j <= 5; ++j) {
            const Eigen::MatrixXd& h = bank.filter(j);
            CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-9);

            // independent spectral-path oracle: V diag(h(lambda)) V^T x
            Eigen::VectorXd x = testutil::random_signal(20, 200 + j);
            Eigen::VectorXd hv(20);
            for (int i = 0; i < 20; ++i) hv(i) = bank.kernel(j).f(spec.eigenvalues(i));
            Eigen::VectorXd expect = spec.eigenvectors *
                                     (hv.asDiagonal() * (spec.eigenvectors.transpose() * x));
            CHECK((apply_filter(bank, j, x) - expect).norm() <= 1e-10 * (1.0 + expect.norm()));

            // an eigenvector scales by its kernel value
            Eigen::VectorXd v = spec.eigenvectors.col(j);
            Eigen::VectorXd hx = apply_filter(bank, j, v);
            CHECK((hx - hv(j) * v).norm() <= 1e-10);
        }
        CHECK(apply_filter(bank, 1, Eigen::VectorXd::Zero(20)).norm() == 0.0);
        CHECK_THROWS_AS(apply_filter(bank, 1, Eigen::VectorXd::Zero(21)),
                        DimensionMismatchError);
        CHECK_THROWS_AS(apply_filter(bank, 6, Eigen::VectorXd::Zero(20)),
                        ScaleOutOfRangeError);
        CHECK_THROWS_AS(bank.kernel(0), ScaleOutOfRangeError);
    }
}

TEST_CASE("filters are permutation equivariant") {
    Graph g = testutil::small_world(24, 51);
    std::vector<int> p = testutil::random_permutation(24, 9);
    ShiftOperator s = build_shift(g, ShiftVariant::NormalizedLaplacian);
    ShiftOperator sp = shift_from_matrix(apply_permutation(s.matrix(), p), s.variant());

    WaveletBank bank = tight_hann_bank(s, 4);
    WaveletBank bank_p = tight_hann_bank(sp, 4);
    for (int j = 1; j <= 4; ++j) {
        Eigen::MatrixXd expected = apply_permutation(bank.filter(j), p);
        CHECK((bank_p.filter(j) - expected).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("declared derivatives agree with central differences") {
    ShiftOperator s = small_world_nl(30, 61);
    std::mt19937_64 rng(77);
    for (const WaveletBank& bank :
         {monic_cubic_bank(s, 5), tight_hann_bank(s, 5),
          diffusion_bank(build_shift(testutil::small_world(30, 61),
                                     ShiftVariant::LazyDiffusion), 5)}) {
        for (int j = 1; j <= bank.scale_count(); ++j) {
            const SpectralKernel& k = bank.kernel(j);
            if (!k.has_analytic_derivative()) continue;
            std::uniform_real_distribution<double> pick(k.lo + 0.05 * (k.hi - k.lo),
                                                        k.hi - 0.05 * (k.hi - k.lo));
            const double step = 1e-6 * (k.hi - k.lo);
            for (int t = 0; t < 100; ++t) {
                double x = pick(rng);
                double fd = (k.f(x + step) - k.f(x - step)) / (2.0 * step);
                double an = k.derivative(x);
                if (std::abs(fd) < 1e-6) continue;  // relative comparison needs signal
                CHECK(an == doctest::Approx(fd).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("frame bounds: measured G range and the frame inequality on signals") {
    ShiftOperator s = small_world_nl(40, 71);
    WaveletBank bank = monic_cubic_bank(s, 6);
    FrameBounds fb = bank.frame_bounds();
    REQUIRE(fb.lower > 0.0);
    REQUIRE(fb.upper >= fb.lower);

    const double a2 = fb.lower * fb.lower;
    const double b2 = fb.upper * fb.upper;
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd x = testutil::random_signal(40, 500 + t);
        double energy = 0.0;
        for (int j = 1; j <= 6; ++j) energy += apply_filter(bank, j, x).squaredNorm();
        CHECK(energy >= a2 * x.squaredNorm() - 1e-6);
        CHECK(energy <= b2 * x.squaredNorm() + 1e-6);
    }
}

TEST_CASE("a single constant kernel has frame bounds A = B = 1") {
    ShiftOperator s = diagonal_shift({0.1, 0.4, 0.8, 1.3});
    std::vector<SpectralKernel> ks(1);
    ks[0].f = [](double) { return 1.0; };
    ks[0].df = [](double) { return 0.0; };
    ks[0].lo = 0.0;
    ks[0].hi = 1.5;
    WaveletBank bank = make_bank(WaveletFamily::Diffusion, std::move(ks), s, true);
    CHECK(bank.frame_bounds().lower == doctest::Approx(1.0));
    CHECK(bank.frame_bounds().upper == doctest::Approx(1.0));
    CHECK(bank.lipschitz() == doctest::Approx(0.0));
}

TEST_CASE("strict frame estimation rejects banks whose G vanishes") {
    ShiftOperator lazy = build_shift(testutil::small_world(20, 81), ShiftVariant::LazyDiffusion);
    WaveletBank bank = diffusion_bank(lazy, 3);  // G(0) = G(1) = 0: not strict
    CHECK(bank.frame_bounds().lower <= 1e-12);
    CHECK_THROWS_AS(estimate_frame_bounds(bank, 1000, true), ZeroFrameLowerBoundError);
    CHECK_NOTHROW(estimate_frame_bounds(bank, 1000, false));
    CHECK_THROWS_AS(estimate_frame_bounds(bank, 99, false), InvalidBankParameterError);
}

TEST_CASE("lipschitz estimates are stable under grid refinement") {
    ShiftOperator s = small_world_nl(50, 91);
    ShiftOperator lazy = build_shift(testutil::small_world(50, 91), ShiftVariant::LazyDiffusion);
    WaveletBank banks[] = {monic_cubic_bank(s, 6), tight_hann_bank(s, 6),
                           diffusion_bank(lazy, 6)};
    for (WaveletBank& bank : banks) {
        double c1 = estimate_lipschitz(bank, 1000);
        double c2 = estimate_lipschitz(bank, 2000);
        CHECK(std::abs(c2 - c1) <= 0.01 * std::max(c1, c2));
    }
}

TEST_CASE("reinstantiation keeps kernels but rebuilds filters on the new operator") {
    Graph g = testutil::small_world(30, 101);
    ShiftOperator s = build_shift(g, ShiftVariant::NormalizedLaplacian);
    WaveletBank bank = tight_hann_bank(s, 5);

    // a slightly rescaled operator: same eigenvectors, scaled eigenvalues
    ShiftOperator s2 = shift_from_matrix((1.1 * s.matrix()).eval(), s.variant());
    WaveletBank moved = reinstantiate(bank, s2);
    CHECK(moved.family() == bank.family());
    CHECK(moved.scale_count() == bank.scale_count());

    // same kernel functions...
    for (int j = 1; j <= 5; ++j) {
        for (double lam : {0.3, 0.9, 1.4}) {
            CHECK(moved.kernel(j).f(lam) == doctest::Approx(bank.kernel(j).f(lam)).epsilon(1e-12));
        }
    }
    // ...but filters follow the new spectrum
    const Spectrum& spec2 = s2.spectrum();
    Eigen::VectorXd x = testutil::random_signal(30, 7);
    Eigen::VectorXd hv(30);
    for (int i = 0; i < 30; ++i) hv(i) = bank.kernel(2).f(spec2.eigenvalues(i));
    Eigen::VectorXd expect =
        spec2.eigenvectors * (hv.asDiagonal() * (spec2.eigenvectors.transpose() * x));
    CHECK((apply_filter(moved, 2, x) - expect).norm() <= 1e-9);

    // the widened domain covers the new spectrum
    CHECK(moved.kernel(1).hi >= spec2.eigenvalues(29) - 1e-12);

    ShiftOperator wrong_size = small_world_nl(20, 3);
    CHECK_THROWS_AS(reinstantiate(bank, wrong_size), DimensionMismatchError);
}

TEST_CASE("chebyshev expansion reproduces constants and polynomials exactly") {
    ShiftOperator s = diagonal_shift({0.05, 0.3, 0.7, 1.1, 1.9});

    SUBCASE("constant kernel: any order gives c*x") {
        std::vector<SpectralKernel> ks(1);
        ks[0].f = [](double) { return 3.25; };
        ks[0].lo = 0.0;
        ks[0].hi = 2.0;
        WaveletBank bank = make_bank(WaveletFamily::Diffusion, std::move(ks), s, true);
        Eigen::VectorXd x = testutil::random_signal(5, 31);
        for (int order : {1, 2, 8}) {
            Eigen::VectorXd y = chebyshev_apply(bank, 1, x, order);
            CHECK((y - 3.25 * x).cwiseAbs().maxCoeff() <= 1e-12 * 3.25 * x.cwiseAbs().maxCoeff() + 1e-12);
        }
    }

    SUBCASE("cubic kernel: orders >= 3 match the exact filter") {
        std::vector<SpectralKernel> ks(1);
        ks[0].f = [](double x) { return 1.0 + x - 0.5 * x * x + 0.25 * x * x * x; };
        ks[0].lo = 0.0;
        ks[0].hi = 2.0;
        WaveletBank bank = make_bank(WaveletFamily::Diffusion, std::move(ks), s, true);
        Eigen::VectorXd x = testutil::random_signal(5, 32);
        Eigen::VectorXd exact = apply_filter(bank, 1, x);
        for (int order : {3, 5, 8}) {
            Eigen::VectorXd y = chebyshev_apply(bank, 1, x, order);
            CHECK((y - exact).norm() <= 1e-8 * exact.norm());
        }
    }
}

TEST_CASE("chebyshev error decreases with order on the tight Hann bank") {
    ShiftOperator s = small_world_nl(50, 111);
    WaveletBank bank = tight_hann_bank(s, 6);
    Eigen::VectorXd x = testutil::random_signal(50, 33);
    for (int j = 1; j <= 6; ++j) {
        Eigen::VectorXd exact = apply_filter(bank, j, x);
        double err8 = (chebyshev_apply(bank, j, x, 8) - exact).norm();
        double err16 = (chebyshev_apply(bank, j, x, 16) - exact).norm();
        double err32 = (chebyshev_apply(bank, j, x, 32) - exact).norm();
        double err64 = (chebyshev_apply(bank, j, x, 64) - exact).norm();
        CHECK(err16 <= err8 + 1e-12);
        CHECK(err32 <= err16 + 1e-12);
        CHECK(err64 <= err32 + 1e-12);
        // measured against the signal scale: the top scale's kernel can carry
        // no spectral energy at all, so the output norm is no yardstick
        CHECK(err64 <= 1e-4 * x.norm());
    }
}

TEST_CASE("chebyshev application rejects spectra outside the kernel domain") {
    ShiftOperator s = diagonal_shift({0.1, 0.5, 1.5});  // 1.5 beyond the declared domain
    std::vector<SpectralKernel> ks(1);
    ks[0].f = [](double x) { return x + 0.5; };  // nonvanishing: strict frame check passes
    ks[0].lo = 0.0;
    ks[0].hi = 1.0;
    WaveletBank bank = make_bank(WaveletFamily::Diffusion, std::move(ks), s, true);
    CHECK_THROWS_AS(chebyshev_apply(bank, 1, Eigen::VectorXd::Zero(3), 8),
                    DomainMismatchError);
}

TEST_CASE("kernel grid dump layout") {
    WaveletBank bank = tight_hann_bank(small_world_nl(20, 121), 4);
    Eigen::MatrixXd grid = kernel_grid(bank, 100);
    CHECK(grid.rows() == 100);
    CHECK(grid.cols() == 5);
    CHECK(grid(0, 0) == doctest::Approx(bank.kernel(1).lo));
    CHECK(grid(99, 0) == doctest::Approx(bank.kernel(1).hi));
    for (int r = 0; r < 100; ++r) {
        for (int j = 1; j <= 4; ++j) {
            CHECK(grid(r, j) == doctest::Approx(bank.kernel(j).f(grid(r, 0))).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(kernel_grid(bank, 1), InvalidBankParameterError);
}
