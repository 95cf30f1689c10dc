#include "gsc/scattering.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gsc/errors.hpp"

namespace gsc {

std::string to_string(AggregatorKind k) {
    switch (k) {
        case AggregatorKind::Mean: return "mean";
        case AggregatorKind::DegreeWeighted: return "degree_weighted";
    }
    return "unknown";
}

Aggregator make_mean_aggregator(int n) {
    if (n < 1) throw DimensionMismatchError("aggregator needs n >= 1");
    Aggregator a;
    a.kind = AggregatorKind::Mean;
    a.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
    a.norm_bound = 1.0;
    return a;
}

Aggregator make_degree_aggregator(const Graph& g) {
    Eigen::VectorXd d = g.degrees();
    const double total = d.sum();
    if (total <= 0.0) throw IsolatedNodeError("degree aggregator needs positive total degree");
    Aggregator a;
    a.kind = AggregatorKind::DegreeWeighted;
    a.weights = d / total;
    a.norm_bound = a.weights.norm();
    return a;
}

double aggregator_distance(const Aggregator& a, const Aggregator& b) {
    if (a.weights.size() != b.weights.size()) {
        throw DimensionMismatchError("aggregator sizes differ");
    }
    return (a.weights - b.weights).norm();
}

std::int64_t path_count(int J, int L, std::int64_t budget) {
    if (J < 1 || L < 1) throw ConfigMismatchError("need J >= 1 and L >= 1");
    std::int64_t total = 0;
    std::int64_t layer = 1;
    for (int l = 0; l < L; ++l) {
        total += layer;
        if (total > budget) {
            throw PathBudgetExceededError("path count exceeds budget of " +
                                          std::to_string(budget));
        }
        if (l + 1 < L) {
            if (layer > budget / J + 1) {
                throw PathBudgetExceededError("path count exceeds budget of " +
                                              std::to_string(budget));
            }
            layer *= J;
        }
    }
    return total;
}

std::vector<Path> enumerate_paths(int J, int L, std::int64_t budget) {
    const std::int64_t total = path_count(J, L, budget);
    std::vector<Path> paths;
    paths.reserve(total);
    paths.push_back({});
    std::int64_t layer_start = 0;
    std::int64_t layer_size = 1;
    for (int l = 1; l < L; ++l) {
        for (std::int64_t p = 0; p < layer_size; ++p) {
            for (int j = 1; j <= J; ++j) {
                Path next = paths[layer_start + p];
                next.push_back(j);
                paths.push_back(std::move(next));
            }
        }
        layer_start += layer_size;
        layer_size *= J;
    }
    return paths;
}

std::int64_t ScatteringRep::index_of(const Path& p) const {
    const int l = static_cast<int>(p.size());
    if (l >= config.L) throw ConfigMismatchError("path longer than L-1 filterings");
    std::int64_t offset = 0;
    std::int64_t layer = 1;
    for (int k = 0; k < l; ++k) {
        offset += layer;
        layer *= config.J;
    }
    std::int64_t within = 0;
    for (int j : p) {
        if (j < 1 || j > config.J) throw ScaleOutOfRangeError("path scale out of range");
        within = within * config.J + (j - 1);
    }
    return offset + within;
}

Path ScatteringRep::path_at(std::int64_t index) const {
    if (index < 0 || index >= coefficients.size()) {
        throw ConfigMismatchError("path index out of range");
    }
    std::int64_t layer_start = 0;
    std::int64_t layer_size = 1;
    int l = 0;
    while (index >= layer_start + layer_size) {
        layer_start += layer_size;
        layer_size *= config.J;
        ++l;
    }
    std::int64_t within = index - layer_start;
    Path p(l);
    for (int k = l - 1; k >= 0; --k) {
        p[k] = static_cast<int>(within % config.J) + 1;
        within /= config.J;
    }
    return p;
}

namespace {

void check_scatter_inputs(const WaveletBank& bank, const Aggregator& agg,
                          Eigen::Index signal_len, int L) {
    if (L < 1) throw ConfigMismatchError("scattering needs L >= 1");
    if (signal_len != bank.shift().size()) {
        throw DimensionMismatchError("signal length does not match operator size");
    }
    if (agg.weights.size() != signal_len) {
        throw DimensionMismatchError("aggregator length does not match signal");
    }
}

ScatterConfig make_config(const WaveletBank& bank, const Aggregator& agg, int L) {
    ScatterConfig cfg;
    cfg.J = bank.scale_count();
    cfg.L = L;
    cfg.family = bank.family();
    cfg.aggregator = agg.kind;
    return cfg;
}

template <bool Parallel>
ScatteringRep scatter_impl(const WaveletBank& bank, const Aggregator& agg,
                           const Eigen::VectorXd& x, int L) {
    check_scatter_inputs(bank, agg, x.size(), L);
    const int J = bank.scale_count();
    const std::int64_t total = path_count(J, L);

    ScatteringRep rep;
    rep.config = make_config(bank, agg, L);
    rep.coefficients.resize(total);
    rep.coefficients(0) = agg.apply(x);

    std::vector<Eigen::VectorXd> layer{x};
    std::int64_t written = 1;
    for (int l = 1; l < L; ++l) {
        const std::int64_t parents = static_cast<std::int64_t>(layer.size());
        std::vector<Eigen::VectorXd> next(parents * J);
        if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
            for (std::int64_t k = 0; k < parents * J; ++k) {
                const std::int64_t p = k / J;
                const int j = static_cast<int>(k % J) + 1;
                next[k] = (bank.filter(j) * layer[p]).cwiseAbs();
                rep.coefficients(written + k) = agg.apply(next[k]);
            }
        } else {
            for (std::int64_t k = 0; k < parents * J; ++k) {
                const std::int64_t p = k / J;
                const int j = static_cast<int>(k % J) + 1;
                next[k] = (bank.filter(j) * layer[p]).cwiseAbs();
                rep.coefficients(written + k) = agg.apply(next[k]);
            }
        }
        written += parents * J;
        layer.swap(next);
    }
    return rep;
}

} // namespace

ScatteringRep scatter(const WaveletBank& bank, const Aggregator& agg, const Eigen::VectorXd& x,
                      int L) {
    return scatter_impl<true>(bank, agg, x, L);
}

ScatteringRep scatter_serial(const WaveletBank& bank, const Aggregator& agg,
                             const Eigen::VectorXd& x, int L) {
    return scatter_impl<false>(bank, agg, x, L);
}

Eigen::MatrixXd scatter_batch(const WaveletBank& bank, const Aggregator& agg,
                              const Eigen::MatrixXd& x, int L) {
    check_scatter_inputs(bank, agg, x.rows(), L);
    const int J = bank.scale_count();
    const std::int64_t total = path_count(J, L);
    const Eigen::Index cols = x.cols();

    Eigen::MatrixXd out(total, cols);
    out.row(0) = agg.weights.transpose() * x;

    std::vector<Eigen::MatrixXd> layer{x};
    std::int64_t written = 1;
    for (int l = 1; l < L; ++l) {
        const std::int64_t parents = static_cast<std::int64_t>(layer.size());
        std::vector<Eigen::MatrixXd> next(parents * J);
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < parents * J; ++k) {
            const std::int64_t p = k / J;
            const int j = static_cast<int>(k % J) + 1;
            next[k] = (bank.filter(j) * layer[p]).cwiseAbs();
            out.row(written + k) = agg.weights.transpose() * next[k];
        }
        written += parents * J;
        layer.swap(next);
    }
    return out;
}

double rep_energy(const ScatteringRep& rep) { return rep.coefficients.squaredNorm(); }

RepDistance rep_distance(const ScatteringRep& a, const ScatteringRep& b) {
    if (!(a.config == b.config)) {
        throw ConfigMismatchError("representations have different configurations");
    }
    if (a.coefficients.size() != b.coefficients.size()) {
        throw ConfigMismatchError("representations have different lengths");
    }
    RepDistance d;
    d.absolute = (a.coefficients - b.coefficients).norm();
    const double ref = a.coefficients.norm();
    d.relative = ref > 0.0 ? d.absolute / ref : (d.absolute > 0.0 ? INFINITY : 0.0);
    return d;
}

void save_rep_csv(const ScatteringRep& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "path,coefficient\n";
    char buf[64];
    for (std::int64_t i = 0; i < rep.coefficients.size(); ++i) {
        Path p = rep.path_at(i);
        if (p.empty()) {
            out << "0";
        } else {
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (k) out << "-";
                out << p[k];
            }
        }
        std::snprintf(buf, sizeof(buf), "%.17g", rep.coefficients(i));
        out << "," << buf << "\n";
    }
}

} // namespace gsc
