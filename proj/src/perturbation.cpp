#include "gsc/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "gsc/errors.hpp"
#include "gsc/rng.hpp"

namespace gsc {

ErrorMatrix dilation_error(int n, double eps, std::uint64_t seed) {
    if (n < 1) throw DimensionMismatchError("dilation error needs n >= 1");
    if (!(eps > 0.0) || eps >= 2.0) {
        throw InfeasibleEpsError("eps must lie in (0, 2), got " + std::to_string(eps));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(1.0 - eps, 1.0);
    ErrorMatrix e;
    e.diag.resize(n);
    for (int i = 0; i < n; ++i) e.diag(i) = dist(rng);
    // Anchor one entry at the top of the draw interval before rescaling. The
    // anchor is then the strict largest-magnitude entry (|others| < 1), so
    // ||E||_2 = eps/2 holds exactly and every ratio e_i/e_anchor stays inside
    // [1-eps, 1], which keeps the structural constraint at most eps even when
    // eps > 1 lets raw draws go negative.
    e.diag(static_cast<int>(rng() % static_cast<std::uint64_t>(n))) = 1.0;
    e.diag *= eps / 2.0;
    e.eps = eps;
    e.structural = structural_constraint(e);
    return e;
}

double structural_constraint(const ErrorMatrix& e) {
    const int n = static_cast<int>(e.diag.size());
    int arg = 0;
    for (int i = 1; i < n; ++i) {
        if (std::abs(e.diag(i)) > std::abs(e.diag(arg))) arg = i;
    }
    const double m = e.diag(arg);  // largest-magnitude eigenvalue, sign preserved
    if (m == 0.0) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(e.diag(i) / m - 1.0));
    return worst;
}

PerturbedGraph perturb_adjacency(const Graph& g, const ErrorMatrix& e) {
    const int n = g.size();
    if (static_cast<int>(e.diag.size()) != n) {
        throw DimensionMismatchError("error matrix size does not match graph");
    }
    const Eigen::MatrixXd& w = g.weights();
    Eigen::MatrixXd w_hat(n, n);
    int clamped = 0;
    for (int i = 0; i < n; ++i) {
        w_hat(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            double v = w(i, j) * (1.0 + e.diag(i) + e.diag(j));
            if (v < 0.0) {
                v = 0.0;
                ++clamped;
            }
            w_hat(i, j) = v;
            w_hat(j, i) = v;
        }
    }
    PerturbedGraph out;
    out.graph = Graph::from_weights(std::move(w_hat), g.labels());
    out.clamped_edges = clamped;
    return out;
}

ShiftOperator perturb_shift(const ShiftOperator& s, const ErrorMatrix& e) {
    const Eigen::MatrixXd& m = s.matrix();
    if (e.diag.size() != m.rows()) {
        throw DimensionMismatchError("error matrix size does not match operator");
    }
    const Eigen::MatrixXd em = e.matrix();
    Eigen::MatrixXd hat = m + em.transpose() * m + m * em;
    hat = ((hat + hat.transpose()) / 2.0).eval();  // kill round-off asymmetry
    return shift_from_matrix(std::move(hat), s.variant());
}

EdgeDropResult edge_drop(const Graph& g, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw DataError("drop probability must lie in [0, 1]");
    const int n = g.size();
    Eigen::MatrixXd w = g.weights();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int dropped = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (w(i, j) == 0.0) continue;
            if (coin(rng) < p) {
                w(i, j) = 0.0;
                w(j, i) = 0.0;
                ++dropped;
            }
        }
    }
    EdgeDropResult out;
    out.graph = Graph::from_weights(std::move(w), g.labels());
    out.dropped_edges = dropped;
    return out;
}

namespace {

struct SolveResult {
    double norm = 0.0;
    double residual = 0.0;
};

/// Least-Frobenius-norm solution of E^T S + S E = delta in the eigenbasis of
/// S; returns ||E||_2 and the equation residual.
SolveResult solve_dilation(const Spectrum& spec, const Eigen::MatrixXd& delta) {
    const Eigen::VectorXd& lam = spec.eigenvalues;
    const Eigen::MatrixXd& v = spec.eigenvectors;
    const int n = static_cast<int>(lam.size());
    Eigen::MatrixXd dt = v.transpose() * delta * v;
    Eigen::MatrixXd et(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double denom = lam(i) + lam(j);
            et(i, j) = std::abs(denom) < 1e-10 ? 0.0 : dt(i, j) / denom;
        }
    }
    Eigen::MatrixXd e = v * et * v.transpose();
    e = ((e + e.transpose()) / 2.0).eval();
    SolveResult out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
    out.norm = es.eigenvalues().cwiseAbs().maxCoeff();
    const Eigen::MatrixXd s = v * lam.asDiagonal() * v.transpose();
    out.residual = (e.transpose() * s + s * e - delta).norm();
    return out;
}

} // namespace

RelativeDistanceResult relative_distance(const ShiftOperator& s, const ShiftOperator& s_hat,
                                         bool exact_perm) {
    const int n = s.size();
    if (s_hat.size() != n) throw DimensionMismatchError("operator sizes differ");
    const Spectrum& spec = s.spectrum();

    RelativeDistanceResult best;
    if (!exact_perm) {
        SolveResult r = solve_dilation(spec, s_hat.matrix() - s.matrix());
        best.value = r.norm;
        best.residual = r.residual;
        best.exact = false;
        return best;
    }
    if (n > 8) {
        throw TooLargeForExactError("exact permutation search is limited to n <= 8 (got n = " +
                                    std::to_string(n) + ")");
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    bool first = true;
    do {
        Eigen::MatrixXd permuted = apply_permutation(s_hat.matrix(), perm);
        SolveResult r = solve_dilation(spec, permuted - s.matrix());
        if (first || r.norm < best.value) {
            best.value = r.norm;
            best.residual = r.residual;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.exact = true;
    return best;
}

double xi_sum(int r, double B, int J, int L) {
    if (r < 0 || J < 1 || L < 1) throw ConfigMismatchError("xi_sum needs r >= 0, J >= 1, L >= 1");
    const double base = B * B * static_cast<double>(J);
    double total = 0.0;
    double power = 1.0;  // base^l
    for (int l = 0; l < L; ++l) {
        double weight = 1.0;
        for (int k = 0; k < r; ++k) weight *= l;
        total += weight * power;
        power *= base;
    }
    return total;
}

double coefficient_bound(double eps, double C, double B, int ell, double B_U, double eps_U) {
    if (ell < 0) throw ConfigMismatchError("layer index must be >= 0");
    const double b_ell = std::pow(B, ell);
    const double filter_term =
        ell == 0 ? 0.0 : B_U * eps * C * ell * std::pow(B, ell - 1);
    return eps_U * b_ell + filter_term;
}

double stability_bound(double eps, double C, double B, int J, int L, double B_U,
                       double eps_U) {
    const double g = eps * C / B;
    const double xi0 = xi_sum(0, B, J, L);
    const double xi1 = xi_sum(1, B, J, L);
    const double xi2 = xi_sum(2, B, J, L);
    const double sq = eps_U * eps_U * xi0 + 2.0 * eps_U * B_U * g * xi1 + B_U * B_U * g * g * xi2;
    return std::sqrt(std::max(0.0, sq));
}

OperatorDifference wavelet_output_difference(const WaveletBank& bank, const WaveletBank& bank_hat,
                                             int j, int trials, std::uint64_t seed) {
    if (bank.family() != bank_hat.family() || bank.scale_count() != bank_hat.scale_count()) {
        throw ConfigMismatchError("banks must share family and scale count");
    }
    if (trials < 1) throw ConfigMismatchError("need at least one trial");
    const Eigen::MatrixXd diff = bank.filter(j) - bank_hat.filter(j);
    OperatorDifference out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
    out.exact = es.eigenvalues().cwiseAbs().maxCoeff();
    std::mt19937_64 rng(seed);
    const int n = static_cast<int>(diff.rows());
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd x = unit_signal(n, rng);
        out.monte_carlo = std::max(out.monte_carlo, (diff * x).norm());
    }
    return out;
}

} // namespace gsc
