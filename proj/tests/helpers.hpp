// Shared fixtures and small utilities for the unit tests.
#pragma once

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsc/generators.hpp"
#include "gsc/graph.hpp"
#include "gsc/shift.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("gsc_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }
    std::string subdir(const std::string& name) const {
        std::filesystem::path sub = path_ / name;
        std::filesystem::create_directories(sub);
        return sub.string();
    }

  private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline gsc::Graph small_world(int n = 40, std::uint64_t seed = 5) {
    return gsc::generate_small_world(n, 0.3, 0.1, seed);
}

inline Eigen::VectorXd random_signal(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = gauss(rng);
    return x;
}

/// Uniformly random permutation of 0..n-1.
inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::mt19937_64 rng(seed);
    for (int i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<int> pick(0, i);
        std::swap(p[i], p[pick(rng)]);
    }
    return p;
}

} // namespace testutil
