#include "gsc/shift.hpp"

#include <cmath>
#include <cstdlib>

#include <Eigen/Dense>

#include "gsc/errors.hpp"

namespace gsc {

std::string to_string(ShiftVariant v) {
    switch (v) {
        case ShiftVariant::Adjacency: return "adjacency";
        case ShiftVariant::Laplacian: return "laplacian";
        case ShiftVariant::NormalizedLaplacian: return "normalized_laplacian";
        case ShiftVariant::LazyDiffusion: return "lazy_diffusion";
    }
    return "unknown";
}

struct ShiftOperator::Cache {
    std::once_flag once;
    Spectrum spectrum;
};

namespace {

Spectrum decompose(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailureError("symmetric eigendecomposition did not converge");
    }
    Spectrum spec;
    spec.eigenvalues = solver.eigenvalues();
    spec.eigenvectors = solver.eigenvectors();
    // Deterministic sign convention: largest-magnitude entry (lowest index on
    // ties) of each eigenvector is nonnegative.
    const int n = static_cast<int>(spec.eigenvectors.cols());
    for (int c = 0; c < n; ++c) {
        int arg = 0;
        double best = std::abs(spec.eigenvectors(0, c));
        for (int r = 1; r < n; ++r) {
            double a = std::abs(spec.eigenvectors(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (spec.eigenvectors(arg, c) < 0.0) spec.eigenvectors.col(c) = -spec.eigenvectors.col(c);
    }
    return spec;
}

} // namespace

const Spectrum& ShiftOperator::spectrum() const& {
    std::call_once(cache_->once, [this] { cache_->spectrum = decompose(m_); });
    return cache_->spectrum;
}

ShiftOperator build_shift(const Graph& g, ShiftVariant variant) {
    const int n = g.size();
    const Eigen::MatrixXd& w = g.weights();
    const Eigen::VectorXd d = g.degrees();

    ShiftOperator s;
    s.variant_ = variant;
    s.cache_ = std::make_shared<ShiftOperator::Cache>();
    switch (variant) {
        case ShiftVariant::Adjacency:
            s.m_ = w;
            break;
        case ShiftVariant::Laplacian:
            s.m_ = Eigen::MatrixXd(d.asDiagonal());
            s.m_ -= w;
            break;
        case ShiftVariant::NormalizedLaplacian:
        case ShiftVariant::LazyDiffusion: {
            for (int i = 0; i < n; ++i) {
                if (d(i) <= 0.0) {
                    throw IsolatedNodeError("node " + std::to_string(i) +
                                            " has zero degree; " + to_string(variant) +
                                            " is undefined");
                }
            }
            Eigen::VectorXd dinv = d.array().rsqrt();
            Eigen::MatrixXd an = dinv.asDiagonal() * w * dinv.asDiagonal();
            an = ((an + an.transpose()) / 2.0).eval();  // restore exact symmetry
            if (variant == ShiftVariant::NormalizedLaplacian) {
                s.m_ = Eigen::MatrixXd::Identity(n, n) - an;
            } else {
                s.m_ = (Eigen::MatrixXd::Identity(n, n) + an) / 2.0;
            }
            break;
        }
    }
    return s;
}

ShiftOperator shift_from_matrix(Eigen::MatrixXd m, ShiftVariant variant) {
    if (m.rows() != m.cols()) throw DimensionMismatchError("shift matrix must be square");
    if (m != m.transpose().eval()) {
        throw AsymmetricInputError("shift matrix must be symmetric");
    }
    ShiftOperator s;
    s.variant_ = variant;
    s.m_ = std::move(m);
    s.cache_ = std::make_shared<ShiftOperator::Cache>();
    return s;
}

const Spectrum& eigendecompose(const ShiftOperator& s) { return s.spectrum(); }

Eigen::VectorXd gft(const Spectrum& spec, const Eigen::VectorXd& x) {
    if (x.size() != spec.eigenvectors.rows()) {
        throw DimensionMismatchError("signal length does not match eigenbasis");
    }
    return spec.eigenvectors.transpose() * x;
}

Eigen::VectorXd igft(const Spectrum& spec, const Eigen::VectorXd& xt) {
    if (xt.size() != spec.eigenvectors.cols()) {
        throw DimensionMismatchError("coefficient length does not match eigenbasis");
    }
    return spec.eigenvectors * xt;
}

namespace {

void check_permutation(const std::vector<int>& perm, int n) {
    if (static_cast<int>(perm.size()) != n) {
        throw InvalidPermutationError("permutation length does not match node count");
    }
    std::vector<char> seen(n, 0);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[p]) {
            throw InvalidPermutationError("permutation is not a bijection on 0..n-1");
        }
        seen[p] = 1;
    }
}

} // namespace

Eigen::MatrixXd apply_permutation(const Eigen::MatrixXd& m, const std::vector<int>& perm) {
    const int n = static_cast<int>(m.rows());
    check_permutation(perm, n);
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m(perm[i], perm[j]);
    return out;
}

Eigen::VectorXd apply_permutation(const Eigen::VectorXd& x, const std::vector<int>& perm) {
    const int n = static_cast<int>(x.size());
    check_permutation(perm, n);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out(i) = x(perm[i]);
    return out;
}

Graph apply_permutation(const Graph& g, const std::vector<int>& perm) {
    Eigen::MatrixXd w = apply_permutation(g.weights(), perm);
    std::vector<std::string> labels;
    if (g.has_labels()) {
        labels.resize(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) labels[i] = g.labels()[perm[i]];
    }
    return Graph::from_weights(std::move(w), std::move(labels));
}

std::vector<int> inverse_permutation(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
}

} // namespace gsc
