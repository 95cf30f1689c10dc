#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsc/graph.hpp"

namespace gsc {

enum class ShiftVariant {
    Adjacency,            // S = W
    Laplacian,            // S = D - W
    NormalizedLaplacian,  // S = D^{-1/2} (D - W) D^{-1/2}
    LazyDiffusion,        // S = (I + D^{-1/2} W D^{-1/2}) / 2
};

std::string to_string(ShiftVariant v);

/// Symmetric eigendecomposition S = V diag(lambda) V^T with eigenvalues
/// ascending and a deterministic sign convention: in each eigenvector the
/// entry of largest magnitude (lowest index on ties) is nonnegative.
struct Spectrum {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

/// A graph shift operator: symmetric matrix plus a lazily computed, cached
/// spectrum. Copies share the cache; concurrent first access computes the
/// decomposition exactly once.
class ShiftOperator {
public:
    ShiftOperator() = default;

    ShiftVariant variant() const { return variant_; }
    const Eigen::MatrixXd& matrix() const { return m_; }
    int size() const { return static_cast<int>(m_.rows()); }

    /// Cached eigendecomposition (computed on first call, thread-safe).
    /// The reference is owned by this operator's cache: calling on a
    /// temporary would dangle, so that overload is deleted.
    const Spectrum& spectrum() const&;
    const Spectrum& spectrum() const&& = delete;

    friend ShiftOperator build_shift(const Graph& g, ShiftVariant variant);
    friend ShiftOperator shift_from_matrix(Eigen::MatrixXd m, ShiftVariant variant);

private:
    struct Cache;
    ShiftVariant variant_ = ShiftVariant::Adjacency;
    Eigen::MatrixXd m_;
    std::shared_ptr<Cache> cache_;
};

/// Builds the requested shift operator. Normalized variants require every
/// degree to be positive (IsolatedNodeError otherwise).
ShiftOperator build_shift(const Graph& g, ShiftVariant variant);

/// Wraps an explicit symmetric matrix as a shift operator (used for permuted
/// operators and tests). Symmetry is validated.
ShiftOperator shift_from_matrix(Eigen::MatrixXd m, ShiftVariant variant);

/// Eigendecomposition of the shift (cached; see ShiftOperator::spectrum).
/// Deleted for rvalues: the returned reference lives in the operator's
/// cache, so the operator must outlive it.
const Spectrum& eigendecompose(const ShiftOperator& s);
const Spectrum& eigendecompose(ShiftOperator&&) = delete;

/// Graph Fourier transform x~ = V^T x and its inverse x = V x~.
Eigen::VectorXd gft(const Spectrum& spec, const Eigen::VectorXd& x);
Eigen::VectorXd igft(const Spectrum& spec, const Eigen::VectorXd& xt);

/// Relabels nodes: entry i of the result corresponds to node perm[i] of the
/// input. perm must be a bijection on 0..n-1.
Eigen::MatrixXd apply_permutation(const Eigen::MatrixXd& m, const std::vector<int>& perm);
Eigen::VectorXd apply_permutation(const Eigen::VectorXd& x, const std::vector<int>& perm);
Graph apply_permutation(const Graph& g, const std::vector<int>& perm);

std::vector<int> inverse_permutation(const std::vector<int>& perm);

} // namespace gsc
