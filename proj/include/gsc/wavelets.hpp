#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsc/shift.hpp"

namespace gsc {

enum class WaveletFamily { MonicCubic, TightHann, Diffusion };

std::string to_string(WaveletFamily f);

/// A scalar kernel h(lambda) on a declared domain [lo, hi]. The formula is
/// globally defined, so evaluation outside the domain is permitted (needed
/// when the same kernels are instantiated on a perturbed operator whose
/// spectrum stretches slightly); the domain governs Chebyshev fits and grid
/// estimates.
struct SpectralKernel {
    std::function<double(double)> f;
    std::function<double(double)> df;  // empty -> central finite differences
    double lo = 0.0;
    double hi = 1.0;

    double operator()(double x) const { return f(x); }
    bool has_analytic_derivative() const { return static_cast<bool>(df); }
    double derivative(double x) const;
};

struct FrameBounds {
    double lower = 0.0;          // A
    double upper = 0.0;          // B
    double argmin_lambda = 0.0;  // where G(lambda) = sum_j h_j^2 attains its minimum
};

/// A family of J kernels instantiated on one shift operator: filter matrices
/// H_j = V diag(h_j(Lambda)) V^T plus measured frame bounds and integral
/// Lipschitz constant. Immutable after construction except for the measured
/// (A, B, C) fields, which the estimate_* operations refresh.
class WaveletBank {
public:
    WaveletFamily family() const { return family_; }
    int scale_count() const { return static_cast<int>(kernels_.size()); }
    const std::vector<SpectralKernel>& kernels() const { return kernels_; }
    const SpectralKernel& kernel(int j) const;          // j is 1-based
    const Eigen::MatrixXd& filter(int j) const;         // j is 1-based
    const ShiftOperator& shift() const { return shift_; }
    const FrameBounds& frame_bounds() const { return frame_; }
    double lipschitz() const { return lipschitz_; }

    friend WaveletBank make_bank(WaveletFamily family, std::vector<SpectralKernel> kernels,
                                 const ShiftOperator& shift, bool strict_frame);
    friend FrameBounds estimate_frame_bounds(WaveletBank& bank, int grid_size, bool strict);
    friend double estimate_lipschitz(WaveletBank& bank, int grid_size);

private:
    WaveletFamily family_ = WaveletFamily::Diffusion;
    std::vector<SpectralKernel> kernels_;
    std::vector<Eigen::MatrixXd> filters_;
    ShiftOperator shift_;
    FrameBounds frame_;
    double lipschitz_ = 0.0;
};

/// Assembles a bank from explicit kernels: materializes the filter matrices
/// on the shift's spectrum and measures frame bounds (strict_frame rejects a
/// zero lower bound) and the Lipschitz constant. The named bank builders
/// below all funnel through this.
WaveletBank make_bank(WaveletFamily family, std::vector<SpectralKernel> kernels,
                      const ShiftOperator& shift, bool strict_frame);

/// Band-pass kernels h_j(lambda) = g(t_j lambda) built from the monic cubic
/// prototype g (power rise x^alpha below x1, cubic interior, power decay
/// x^-beta above x2), with x1 and x2 the lower/upper spectral quartiles and
/// J-1 scales t_j log-spaced from x2/lambda_min_design down to x2/lambda_max,
/// lambda_min_design = lambda_max/k_ratio. Kernel 1 is the low-pass
/// gamma*exp(-(lambda/(0.6*lambda_min_design))^4) with gamma matching the
/// band-pass maximum.
WaveletBank monic_cubic_bank(const ShiftOperator& shift, int J, double alpha = 2.0,
                             double beta = 2.0, double k_ratio = 20.0);

/// Hann windows of width R*Delta, uniformly translated by Delta in the warped
/// coordinate u = log(max(lambda, lambda_2/2)), Delta = (u_max-u_min)/(J-R+1),
/// band-pass centers u_min + Delta*(j-1) + R*Delta/2 for j = 1..J-1. Kernel 1
/// is sqrt(c - sum of squared band-pass kernels), c their grid maximum, which
/// forces an exactly tight frame on the design grid.
WaveletBank tight_hann_bank(const ShiftOperator& shift, int J, int R = 3, double a0 = 0.5,
                            double a1 = 0.5);

/// Diffusion kernels h_j(t) = t^(2^(j-1)) * (1 - t^(2^(j-1))) on the spectrum
/// of the lazy diffusion operator. The frame lower bound is structurally 0
/// (every kernel vanishes at t = 0 and t = 1); the degree-weighted aggregator
/// supplies the missing low-pass direction.
WaveletBank diffusion_bank(const ShiftOperator& shift, int J);

/// Same kernels instantiated on another shift operator (used to compare a
/// bank across an original/perturbed operator pair). The declared kernel
/// domains widen to cover the new spectrum; frame bounds and the Lipschitz
/// constant are re-measured.
WaveletBank reinstantiate(const WaveletBank& bank, const ShiftOperator& shift);

/// y = H_j x via the materialized filter matrix. j is 1-based.
Eigen::VectorXd apply_filter(const WaveletBank& bank, int j, const Eigen::VectorXd& x);

/// y ~= H_j x via the degree-`order` Chebyshev expansion of h_j over its
/// declared domain, evaluated with the three-term recurrence on the
/// shifted/scaled shift matrix. Never forms h_j(Lambda). The shift spectrum
/// must lie inside the declared domain (DomainMismatchError).
Eigen::VectorXd chebyshev_apply(const WaveletBank& bank, int j, const Eigen::VectorXd& x,
                                int order);

/// Chebyshev expansion coefficients c_0..c_order of h_j over [lo, hi].
std::vector<double> chebyshev_coefficients(const SpectralKernel& kernel, int order);

/// (A, B) = (sqrt min, sqrt max) of G(lambda) = sum_j h_j(lambda)^2 over the
/// union of the actual eigenvalues and a uniform grid of grid_size points on
/// the declared domain. Stores the result on the bank. When strict, A <=
/// 1e-12 raises ZeroFrameLowerBoundError naming the offending lambda.
FrameBounds estimate_frame_bounds(WaveletBank& bank, int grid_size = 1000, bool strict = true);

/// C = max over scales and grid of |lambda * h_j'(lambda)|, the integral
/// Lipschitz constant fed to the stability bounds. Stores the result.
double estimate_lipschitz(WaveletBank& bank, int grid_size = 2000);

/// Kernel values tabulated on a uniform grid over the declared domain; column
/// 0 holds lambda, column j holds h_j. Used by the kernel-dump output.
Eigen::MatrixXd kernel_grid(const WaveletBank& bank, int points);

} // namespace gsc
