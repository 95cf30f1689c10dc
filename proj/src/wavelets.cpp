#include "gsc/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "gsc/errors.hpp"

namespace gsc {

std::string to_string(WaveletFamily f) {
    switch (f) {
        case WaveletFamily::MonicCubic: return "monic_cubic";
        case WaveletFamily::TightHann: return "tight_hann";
        case WaveletFamily::Diffusion: return "diffusion";
    }
    return "unknown";
}

double SpectralKernel::derivative(double x) const {
    if (df) return df(x);
    const double step = 1e-6 * (hi - lo > 0.0 ? hi - lo : 1.0);
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

const SpectralKernel& WaveletBank::kernel(int j) const {
    if (j < 1 || j > scale_count()) {
        throw ScaleOutOfRangeError("scale " + std::to_string(j) + " outside 1.." +
                                   std::to_string(scale_count()));
    }
    return kernels_[j - 1];
}

const Eigen::MatrixXd& WaveletBank::filter(int j) const {
    if (j < 1 || j > scale_count()) {
        throw ScaleOutOfRangeError("scale " + std::to_string(j) + " outside 1.." +
                                   std::to_string(scale_count()));
    }
    return filters_[j - 1];
}

namespace {

/// Evaluation points for grid estimates: uniform grid over the declared
/// domain plus every actual eigenvalue.
std::vector<double> union_grid(const WaveletBank& bank, int grid_size) {
    const SpectralKernel& k0 = bank.kernels().front();
    std::vector<double> pts;
    pts.reserve(grid_size + bank.shift().size());
    for (int i = 0; i < grid_size; ++i) {
        pts.push_back(k0.lo + (k0.hi - k0.lo) * i / static_cast<double>(grid_size - 1));
    }
    const Eigen::VectorXd& ev = bank.shift().spectrum().eigenvalues;
    for (int i = 0; i < ev.size(); ++i) pts.push_back(ev(i));
    return pts;
}

} // namespace

WaveletBank make_bank(WaveletFamily family, std::vector<SpectralKernel> kernels,
                      const ShiftOperator& shift, bool strict_frame) {
    WaveletBank bank;
    bank.family_ = family;
    bank.kernels_ = std::move(kernels);
    bank.shift_ = shift;
    const Spectrum& spec = shift.spectrum();
    const Eigen::VectorXd& ev = spec.eigenvalues;
    bank.filters_.reserve(bank.kernels_.size());
    for (const SpectralKernel& k : bank.kernels_) {
        Eigen::VectorXd hv(ev.size());
        for (int i = 0; i < ev.size(); ++i) hv(i) = k.f(ev(i));
        Eigen::MatrixXd h = spec.eigenvectors * hv.asDiagonal() * spec.eigenvectors.transpose();
        bank.filters_.push_back(((h + h.transpose()) / 2.0).eval());
    }
    estimate_frame_bounds(bank, 1000, strict_frame);
    estimate_lipschitz(bank, 2000);
    return bank;
}

WaveletBank monic_cubic_bank(const ShiftOperator& shift, int J, double alpha, double beta,
                             double k_ratio) {
    if (J < 2) throw InvalidBankParameterError("monic cubic bank needs J >= 2");
    if (alpha <= 0.0 || beta <= 0.0) throw InvalidBankParameterError("alpha and beta must be > 0");
    if (k_ratio <= 1.0) throw InvalidBankParameterError("k_ratio must exceed 1");

    const Eigen::VectorXd& ev = shift.spectrum().eigenvalues;
    const int n = static_cast<int>(ev.size());
    if (n < 4) throw DegenerateSpectrumError("need at least 4 eigenvalues for quartile design");
    if (ev(0) < -1e-9 * std::abs(ev(n - 1))) {
        throw DegenerateSpectrumError("monic cubic design expects a nonnegative spectrum");
    }
    // Spectral quartiles, 1-based indices floor(N/4) and ceil(3N/4).
    const int i1 = n / 4;                 // 1-based floor(N/4)
    const int i2 = (3 * n + 3) / 4;       // 1-based ceil(3N/4)
    const double q1 = ev(i1 - 1);
    const double q2 = ev(i2 - 1);
    const double lambda_max = ev(n - 1);
    if (!(q1 > 0.0) || !(q2 > q1)) {
        throw DegenerateSpectrumError("spectral quartiles must satisfy 0 < x1 < x2 (got x1=" +
                                      std::to_string(q1) + ", x2=" + std::to_string(q2) + ")");
    }
    if (!(lambda_max > 0.0)) throw DegenerateSpectrumError("lambda_max must be positive");

    // Cubic interior s(x): s(x1) = s(x2) = 1, s'(x1) = alpha/x1, s'(x2) = -beta/x2.
    Eigen::Matrix4d m;
    Eigen::Vector4d rhs;
    m << 1.0, q1, q1 * q1, q1 * q1 * q1,
         1.0, q2, q2 * q2, q2 * q2 * q2,
         0.0, 1.0, 2.0 * q1, 3.0 * q1 * q1,
         0.0, 1.0, 2.0 * q2, 3.0 * q2 * q2;
    rhs << 1.0, 1.0, alpha / q1, -beta / q2;
    Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
    if (!lu.isInvertible()) {
        throw SingularCubicSystemError("cubic interpolation system is singular");
    }
    const Eigen::Vector4d c = lu.solve(rhs);

    auto g = [q1, q2, alpha, beta, c](double x) -> double {
        if (x <= 0.0) return 0.0;
        if (x < q1) return std::pow(x / q1, alpha);
        if (x > q2) return std::pow(q2 / x, beta);
        return c(0) + x * (c(1) + x * (c(2) + x * c(3)));
    };
    auto dg = [q1, q2, alpha, beta, c](double x) -> double {
        if (x <= 0.0) return 0.0;
        if (x < q1) return (alpha / q1) * std::pow(x / q1, alpha - 1.0);
        if (x > q2) return (-beta / x) * std::pow(q2 / x, beta);
        return c(1) + x * (2.0 * c(2) + x * 3.0 * c(3));
    };

    const double lambda_min_design = lambda_max / k_ratio;
    const double t_hi = q2 / lambda_min_design;
    const double t_lo = q2 / lambda_max;
    std::vector<double> scales(J - 1);
    if (J == 2) {
        scales[0] = t_hi;
    } else {
        for (int i = 0; i < J - 1; ++i) {
            scales[i] = std::exp(std::log(t_hi) +
                                 (std::log(t_lo) - std::log(t_hi)) * i / double(J - 2));
        }
    }

    std::vector<SpectralKernel> kernels(J);
    for (int i = 0; i < J - 1; ++i) {
        double t = scales[i];
        kernels[i + 1].f = [g, t](double lam) { return g(t * lam); };
        kernels[i + 1].df = [dg, t](double lam) { return t * dg(t * lam); };
        kernels[i + 1].lo = 0.0;
        kernels[i + 1].hi = lambda_max;
    }

    // gamma: the maximum any band-pass kernel attains on the design grid.
    double gamma = 0.0;
    const int grid = 1000;
    for (int i = 0; i < grid; ++i) {
        double lam = lambda_max * i / double(grid - 1);
        for (int j = 1; j < J; ++j) gamma = std::max(gamma, kernels[j].f(lam));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 1; j < J; ++j) gamma = std::max(gamma, kernels[j].f(ev(i)));
    }
    const double a = 0.6 * lambda_min_design;
    kernels[0].f = [gamma, a](double lam) {
        double u = lam / a;
        double u2 = u * u;
        return gamma * std::exp(-u2 * u2);
    };
    kernels[0].df = [gamma, a](double lam) {
        double u = lam / a;
        double u2 = u * u;
        return gamma * std::exp(-u2 * u2) * (-4.0 * lam * lam * lam / (a * a * a * a));
    };
    kernels[0].lo = 0.0;
    kernels[0].hi = lambda_max;

    return make_bank(WaveletFamily::MonicCubic, std::move(kernels), shift, true);
}

WaveletBank tight_hann_bank(const ShiftOperator& shift, int J, int R, double a0, double a1) {
    if (R < 2) throw InvalidBankParameterError("tight Hann bank needs R >= 2");
    if (J < R) throw InvalidBankParameterError("tight Hann bank needs J >= R");
    if (a0 <= 0.0 || a1 <= 0.0) throw InvalidBankParameterError("window coefficients must be > 0");

    const Eigen::VectorXd& ev = shift.spectrum().eigenvalues;
    const int n = static_cast<int>(ev.size());
    const double lambda_max = ev(n - 1);
    if (!(lambda_max > 0.0)) throw DegenerateSpectrumError("lambda_max must be positive");
    const double tol = 1e-10 * std::max(1.0, std::abs(lambda_max));
    // The spectral-gap eigenvalue: second in ascending order. A repeated zero
    // (disconnected graph) leaves the log-warped coordinate undefined.
    const double lambda2 = ev(1);
    if (lambda2 <= tol) {
        throw DegenerateSpectrumError(
            "second eigenvalue is not positive (disconnected graph?): warping undefined");
    }
    const double lambda_floor = lambda2 / 2.0;
    const double u_min = std::log(lambda_floor);
    const double u_max = std::log(lambda_max);
    if (!(u_max > u_min)) throw DegenerateSpectrumError("degenerate warped range");
    const double delta = (u_max - u_min) / double(J - R + 1);
    const double width = R * delta;
    const double half = width / 2.0;

    auto warp = [lambda_floor, u_min](double lam) {
        return lam > lambda_floor ? std::log(lam) : u_min;
    };
    auto window = [a0, a1, width, half](double v) {
        if (std::abs(v) > half) return 0.0;
        return a0 + a1 * std::cos(2.0 * M_PI * v / width);
    };
    auto dwindow = [a1, width, half](double v) {
        if (std::abs(v) > half) return 0.0;
        return -a1 * (2.0 * M_PI / width) * std::sin(2.0 * M_PI * v / width);
    };

    std::vector<double> centers(J - 1);
    for (int m = 1; m <= J - 1; ++m) centers[m - 1] = u_min + delta * (m - 1) + half;

    std::vector<SpectralKernel> kernels(J);
    for (int m = 1; m <= J - 1; ++m) {
        double cm = centers[m - 1];
        kernels[m].f = [warp, window, cm](double lam) { return window(warp(lam) - cm); };
        kernels[m].df = [warp, dwindow, cm, lambda_floor](double lam) {
            if (lam <= lambda_floor) return 0.0;  // warp is constant below the floor
            return dwindow(warp(lam) - cm) / lam;
        };
        kernels[m].lo = 0.0;
        kernels[m].hi = lambda_max;
    }

    // c: grid maximum of the band-pass energy. The same evaluation set is used
    // by estimate_frame_bounds, which makes the frame exactly tight there.
    // The band-pass functions are copied by value: the low-pass kernel built
    // from band_energy outlives this frame (the kernel vector is moved out).
    std::vector<std::function<double(double)>> band;
    band.reserve(static_cast<std::size_t>(J - 1));
    for (int m = 1; m <= J - 1; ++m) band.push_back(kernels[m].f);
    auto band_energy = [band](double lam) {
        double s = 0.0;
        for (const auto& f : band) {
            double v = f(lam);
            s += v * v;
        }
        return s;
    };
    double c = 0.0;
    const int grid = 1000;
    for (int i = 0; i < grid; ++i) c = std::max(c, band_energy(lambda_max * i / double(grid - 1)));
    for (int i = 0; i < n; ++i) c = std::max(c, band_energy(ev(i)));

    // Across the interior covered by the translates the band energies sum to
    // exactly c (the two-term window overlaps to a constant), so the deficit
    // there is pure rounding noise; sqrt would amplify ~1e-16 of noise to
    // ~1e-8 and vary between otherwise-identical banks (e.g. a graph and its
    // relabeling). Deficits below the noise floor are therefore snapped to an
    // exact zero.
    const double deficit_floor = 1e-12 * c;
    kernels[0].f = [band_energy, c, deficit_floor](double lam) {
        const double deficit = c - band_energy(lam);
        return deficit > deficit_floor ? std::sqrt(deficit) : 0.0;
    };
    kernels[0].df = nullptr;  // finite differences; the sqrt complement has no closed form
    kernels[0].lo = 0.0;
    kernels[0].hi = lambda_max;

    return make_bank(WaveletFamily::TightHann, std::move(kernels), shift, true);
}

WaveletBank diffusion_bank(const ShiftOperator& shift, int J) {
    if (J < 1) throw InvalidBankParameterError("diffusion bank needs J >= 1");
    if (shift.variant() != ShiftVariant::LazyDiffusion) {
        throw InvalidBankParameterError("diffusion bank requires the lazy diffusion operator");
    }
    std::vector<SpectralKernel> kernels(J);
    for (int j = 1; j <= J; ++j) {
        const double a = std::ldexp(1.0, j - 1);  // 2^(j-1)
        kernels[j - 1].f = [a](double t) {
            if (t <= 0.0) return 0.0;
            double p = std::pow(t, a);
            return p * (1.0 - p);
        };
        kernels[j - 1].df = [a](double t) {
            if (t <= 0.0) return a == 1.0 ? 1.0 : 0.0;
            double p = std::pow(t, a - 1.0);
            double q = std::pow(t, 2.0 * a - 1.0);
            return a * p - 2.0 * a * q;
        };
        kernels[j - 1].lo = 0.0;
        kernels[j - 1].hi = 1.0;
    }
    return make_bank(WaveletFamily::Diffusion, std::move(kernels), shift, false);
}

WaveletBank reinstantiate(const WaveletBank& bank, const ShiftOperator& shift) {
    if (shift.size() != bank.shift().size()) {
        throw DimensionMismatchError("reinstantiation requires matching operator size");
    }
    std::vector<SpectralKernel> kernels = bank.kernels();
    const Eigen::VectorXd& ev = shift.spectrum().eigenvalues;
    const double lo = std::min(kernels.front().lo, ev(0));
    const double hi = std::max(kernels.front().hi, ev(ev.size() - 1));
    for (SpectralKernel& k : kernels) {
        k.lo = lo;
        k.hi = hi;
    }
    return make_bank(bank.family(), std::move(kernels), shift, false);
}

Eigen::VectorXd apply_filter(const WaveletBank& bank, int j, const Eigen::VectorXd& x) {
    if (x.size() != bank.shift().size()) {
        throw DimensionMismatchError("signal length does not match operator size");
    }
    return bank.filter(j) * x;
}

std::vector<double> chebyshev_coefficients(const SpectralKernel& kernel, int order) {
    if (order < 1) throw InvalidBankParameterError("chebyshev order must be >= 1");
    const int quad = std::max(2048, 4 * (order + 1));
    const double mid = (kernel.hi + kernel.lo) / 2.0;
    const double rad = (kernel.hi - kernel.lo) / 2.0;
    std::vector<double> coeffs(order + 1, 0.0);
    std::vector<double> theta(quad), fval(quad);
    for (int m = 0; m < quad; ++m) {
        theta[m] = M_PI * (m + 0.5) / quad;
        fval[m] = kernel.f(mid + rad * std::cos(theta[m]));
    }
    for (int k = 0; k <= order; ++k) {
        double acc = 0.0;
        for (int m = 0; m < quad; ++m) acc += fval[m] * std::cos(k * theta[m]);
        coeffs[k] = 2.0 * acc / quad;
    }
    return coeffs;
}

Eigen::VectorXd chebyshev_apply(const WaveletBank& bank, int j, const Eigen::VectorXd& x,
                                int order) {
    const SpectralKernel& kernel = bank.kernel(j);
    if (x.size() != bank.shift().size()) {
        throw DimensionMismatchError("signal length does not match operator size");
    }
    const Eigen::VectorXd& ev = bank.shift().spectrum().eigenvalues;
    const double tol = 1e-9 * (kernel.hi - kernel.lo) + 1e-12;
    if (ev(0) < kernel.lo - tol || ev(ev.size() - 1) > kernel.hi + tol) {
        throw DomainMismatchError("shift spectrum exceeds the kernel domain [" +
                                  std::to_string(kernel.lo) + ", " + std::to_string(kernel.hi) +
                                  "]");
    }
    const std::vector<double> c = chebyshev_coefficients(kernel, order);
    const double mid = (kernel.hi + kernel.lo) / 2.0;
    const double rad = (kernel.hi - kernel.lo) / 2.0;
    const Eigen::MatrixXd& s = bank.shift().matrix();

    // Three-term recurrence T_{k+1} = 2 Sbar T_k - T_{k-1}, Sbar = (S - mid I)/rad.
    Eigen::VectorXd t_prev = x;
    Eigen::VectorXd t_cur = (s * x - mid * x) / rad;
    Eigen::VectorXd y = (c[0] / 2.0) * t_prev + c[1] * t_cur;
    for (int k = 2; k <= order; ++k) {
        Eigen::VectorXd t_next = 2.0 * ((s * t_cur - mid * t_cur) / rad) - t_prev;
        y += c[k] * t_next;
        t_prev.swap(t_cur);
        t_cur.swap(t_next);
    }
    return y;
}

FrameBounds estimate_frame_bounds(WaveletBank& bank, int grid_size, bool strict) {
    if (grid_size < 100) throw InvalidBankParameterError("frame grid must have >= 100 points");
    const std::vector<double> pts = union_grid(bank, grid_size);
    double gmin = std::numeric_limits<double>::infinity();
    double gmax = 0.0;
    double argmin = pts.front();
    for (double lam : pts) {
        double g = 0.0;
        for (const SpectralKernel& k : bank.kernels_) {
            double v = k.f(lam);
            g += v * v;
        }
        if (g < gmin) {
            gmin = g;
            argmin = lam;
        }
        gmax = std::max(gmax, g);
    }
    FrameBounds fb;
    fb.lower = std::sqrt(std::max(0.0, gmin));
    fb.upper = std::sqrt(gmax);
    fb.argmin_lambda = argmin;
    bank.frame_ = fb;
    if (strict && fb.lower <= 1e-12) {
        throw ZeroFrameLowerBoundError("frame lower bound vanishes at lambda = " +
                                       std::to_string(argmin));
    }
    return fb;
}

double estimate_lipschitz(WaveletBank& bank, int grid_size) {
    if (grid_size < 1000) throw InvalidBankParameterError("lipschitz grid must have >= 1000 points");
    const std::vector<double> pts = union_grid(bank, grid_size);
    double cmax = 0.0;
    for (const SpectralKernel& k : bank.kernels_) {
        for (double lam : pts) cmax = std::max(cmax, std::abs(lam * k.derivative(lam)));
    }
    bank.lipschitz_ = cmax;
    return cmax;
}

Eigen::MatrixXd kernel_grid(const WaveletBank& bank, int points) {
    if (points < 2) throw InvalidBankParameterError("kernel grid needs >= 2 points");
    const SpectralKernel& k0 = bank.kernels().front();
    Eigen::MatrixXd out(points, bank.scale_count() + 1);
    for (int i = 0; i < points; ++i) {
        double lam = k0.lo + (k0.hi - k0.lo) * i / double(points - 1);
        out(i, 0) = lam;
        for (int j = 0; j < bank.scale_count(); ++j) out(i, j + 1) = bank.kernels()[j].f(lam);
    }
    return out;
}

} // namespace gsc
