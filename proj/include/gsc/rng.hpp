#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

namespace gsc {

/// splitmix64 finalizer; full-period scrambling of a 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable sub-seed derivation: hash of (base, coordinates...). Every cell of a
/// sweep draws its own generator from this, so results are independent of the
/// order (or thread) in which cells execute.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t c : coords) {
        h = splitmix64(h ^ (c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
    }
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// iid N(0, sigma^2) signal.
inline Eigen::VectorXd gaussian_signal(int n, std::mt19937_64& rng, double sigma = 1.0) {
    std::normal_distribution<double> dist(0.0, sigma);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = dist(rng);
    return x;
}

/// Gaussian signal scaled to unit Euclidean norm.
inline Eigen::VectorXd unit_signal(int n, std::mt19937_64& rng) {
    Eigen::VectorXd x = gaussian_signal(n, rng);
    double nrm = x.norm();
    if (nrm > 0.0) x /= nrm;
    return x;
}

} // namespace gsc
