#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gsc/graph.hpp"
#include "gsc/shift.hpp"
#include "gsc/wavelets.hpp"

namespace gsc {

/// Diagonal relative error matrix E = diag(e). Entries are drawn uniformly on
/// [1-eps, 1] and rescaled so ||E||_2 = eps/2 exactly, which keeps the
/// structural constraint ||E/m - I||_2 <= eps (m the signed largest-magnitude
/// eigenvalue).
struct ErrorMatrix {
    Eigen::VectorXd diag;
    double eps = 0.0;         // perturbation budget: ||E||_2 <= eps/2
    double structural = 0.0;  // ||E/m - I||_2 at construction time

    Eigen::MatrixXd matrix() const { return Eigen::MatrixXd(diag.asDiagonal()); }
    double spectral_norm() const { return diag.cwiseAbs().maxCoeff(); }
};

/// Random dilation error (see ErrorMatrix). eps must lie in (0, 2);
/// InfeasibleEpsError otherwise.
ErrorMatrix dilation_error(int n, double eps, std::uint64_t seed);

/// ||E/m_N - I||_2 where m_N is the largest-magnitude eigenvalue of E with
/// its sign preserved. Defined as 0 for E = 0.
double structural_constraint(const ErrorMatrix& e);

struct PerturbedGraph {
    Graph graph;
    int clamped_edges = 0;  // entries clipped at 0 to keep weights nonnegative
};

/// Relative perturbation of the adjacency: W^ = W + E^T W + W E (entrywise
/// W_ij (1 + e_i + e_j)), negative results clamped to zero.
PerturbedGraph perturb_adjacency(const Graph& g, const ErrorMatrix& e);

/// Relative perturbation applied directly to an operator: S^ = S + E^T S + S E
/// with the same variant tag. This is the exact model behind the stability
/// bounds; perturb_adjacency is the corresponding graph-level protocol.
ShiftOperator perturb_shift(const ShiftOperator& s, const ErrorMatrix& e);

struct EdgeDropResult {
    Graph graph;
    int dropped_edges = 0;
};

/// Removes each edge independently with probability p. The result may be
/// disconnected; callers that need connectivity must check.
EdgeDropResult edge_drop(const Graph& g, double p, std::uint64_t seed);

struct RelativeDistanceResult {
    double value = 0.0;        // min over considered permutations of ||E||_2
    double residual = 0.0;     // ||E^T S + S E - (P^T S^ P - S)||_F at the minimizer
    bool exact = false;        // true when all n! permutations were searched
};

/// Relative distance between two shift operators: the least-Frobenius-norm
/// solution E of E^T S + S E = P^T S^ P - S, solved per entry in the
/// eigenbasis of S ((lambda_i + lambda_j) E~_ij = D~_ij, entries with
/// |lambda_i + lambda_j| < 1e-10 pseudo-inverted to 0). With exact_perm the
/// minimization runs over all n! permutations (n <= 8,
/// TooLargeForExactError otherwise); without it only the identity
/// permutation is used and the result is an upper bound.
RelativeDistanceResult relative_distance(const ShiftOperator& s, const ShiftOperator& s_hat,
                                         bool exact_perm = false);

/// xi^(r) = sum_{l=0}^{L-1} l^r (B^2 J)^l by direct summation (stable for
/// B^2 J = 1, where the closed forms degenerate).
double xi_sum(int r, double B, int J, int L);

/// Per-coefficient stability bound at layer l (l filterings):
/// eps_U B^l + B_U eps C l B^(l-1). Mean aggregation has eps_U = 0, B_U = 1.
double coefficient_bound(double eps, double C, double B, int ell, double B_U = 1.0,
                         double eps_U = 0.0);

/// Full-representation stability bound:
/// sqrt(eps_U^2 xi0 + 2 eps_U B_U (eps C / B) xi1 + B_U^2 (eps C / B)^2 xi2).
/// With B_U = 1, eps_U = 0 this is (eps C / B) sqrt(sum l^2 (B^2 J)^l).
double stability_bound(double eps, double C, double B, int J, int L, double B_U = 1.0,
                       double eps_U = 0.0);

struct OperatorDifference {
    double exact = 0.0;        // ||H_j(S) - H_j(S^)||_2 via eigendecomposition
    double monte_carlo = 0.0;  // max over trial unit signals of ||(H_j(S)-H_j(S^)) x||
};

/// Spectral-norm difference of scale j between two instantiations of the same
/// kernels (ConfigMismatchError when families or scale counts differ). The
/// Monte Carlo estimate is returned as a cross-check; it never exceeds the
/// exact value.
OperatorDifference wavelet_output_difference(const WaveletBank& bank, const WaveletBank& bank_hat,
                                             int j, int trials, std::uint64_t seed);

} // namespace gsc
