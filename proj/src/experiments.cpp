#include "gsc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gsc/errors.hpp"
#include "gsc/generators.hpp"
#include "gsc/perturbation.hpp"
#include "gsc/rng.hpp"
#include "gsc/scattering.hpp"
#include "gsc/svm.hpp"
#include "gsc/wavelets.hpp"

namespace gsc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ShiftVariant variant_for(const std::string& family, const ExperimentConfig& config) {
    return family == "diffusion" ? ShiftVariant::LazyDiffusion : config.shift;
}

/// Everything one representation method needs on a fixed graph.
struct FamilyContext {
    std::string name;
    bool is_gft = false;
    ShiftOperator shift;
    std::optional<WaveletBank> bank;
    Aggregator agg;
};

FamilyContext make_family_context(const std::string& name, const Graph& graph,
                                  const ExperimentConfig& config) {
    FamilyContext ctx;
    ctx.name = name;
    ctx.is_gft = name == "gft";
    ctx.shift = build_shift(graph, variant_for(name, config));
    eigendecompose(ctx.shift);  // warm the cache before cells start
    if (!ctx.is_gft) {
        if (name == "monic_cubic") {
            ctx.bank = monic_cubic_bank(ctx.shift, config.J);
        } else if (name == "tight_hann") {
            ctx.bank = tight_hann_bank(ctx.shift, config.J);
        } else {
            ctx.bank = diffusion_bank(ctx.shift, config.J);
        }
        ctx.agg = name == "diffusion" ? make_degree_aggregator(graph)
                                      : make_mean_aggregator(graph.size());
    }
    return ctx;
}

/// GFT coefficients of the columns of x: the full transform when count >= n,
/// otherwise the first `count` (low pass) or the centered window starting at
/// floor((n - count)/2) (band pass) of the ascending spectrum.
Eigen::MatrixXd gft_features(const Spectrum& spec, const Eigen::MatrixXd& x, int count,
                             GftBand band) {
    const int n = static_cast<int>(spec.eigenvalues.size());
    const int k = std::min(count, n);
    const int start = band == GftBand::BandPass ? (n - k) / 2 : 0;
    return spec.eigenvectors.middleCols(start, k).transpose() * x;
}

/// Mean over columns of ||ref - alt|| / ||ref||.
double mean_rel_error(const Eigen::MatrixXd& ref, const Eigen::MatrixXd& alt) {
    double total = 0.0;
    for (Eigen::Index c = 0; c < ref.cols(); ++c) {
        const double d = (ref.col(c) - alt.col(c)).norm();
        const double r = ref.col(c).norm();
        total += (d == 0.0) ? 0.0 : d / r;
    }
    return total / static_cast<double>(ref.cols());
}

Eigen::MatrixXd gaussian_matrix(int n, int cols, std::uint64_t seed) {
    std::mt19937_64 rng = make_rng(seed);
    Eigen::MatrixXd x(n, cols);
    for (int c = 0; c < cols; ++c) x.col(c) = gaussian_signal(n, rng);
    return x;
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : xs) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

SummaryRow summarize(const std::string& experiment, const std::string& family,
                     double sweep_value, const std::string& metric,
                     const std::vector<double>& values) {
    SummaryRow row;
    row.experiment = experiment;
    row.family = family;
    row.sweep_value = sweep_value;
    row.metric_name = metric;
    row.count = static_cast<int>(values.size());
    if (!values.empty()) {
        double total = 0.0;
        for (double v : values) total += v;
        row.mean = total / static_cast<double>(values.size());
        row.stddev = sample_std(values, row.mean);
    }
    return row;
}

void append_skip_row(ExperimentResult& result, const std::string& experiment) {
    SummaryRow row;
    row.experiment = experiment;
    row.family = "all";
    row.sweep_value = 0.0;
    row.metric_name = "skipped_cells";
    row.mean = result.warnings;
    row.stddev = 0.0;
    row.count = 1;
    result.summary.push_back(row);
}

} // namespace

ExperimentResult run_stability_sweep(const ExperimentConfig& config) {
    validate_config(config);
    Eigen::setNbThreads(1);  // cell-level parallelism only: keeps output thread-count independent
    const std::string exp_name = to_string(ExperimentKind::StabilitySweep);
    const std::vector<double> eps_values = config.eps_range.values();
    const int n_eps = static_cast<int>(eps_values.size());
    const int n_fam = static_cast<int>(config.families.size());
    const int n_g = config.n_graphs;
    const int n_r = config.n_perturbations;

    struct GraphCtx {
        std::uint64_t seed = 0;
        Graph graph;
        std::vector<FamilyContext> fams;
        double bound_B = 0.0;
        double bound_C = 0.0;
    };
    std::vector<GraphCtx> graphs(static_cast<std::size_t>(n_g));
    bool emit_bound = false;
    for (int g = 0; g < n_g; ++g) {
        GraphCtx& gc = graphs[static_cast<std::size_t>(g)];
        gc.seed = derive_seed(config.seed, {11, static_cast<std::uint64_t>(g)});
        gc.graph = generate_small_world(config.n, config.p_edge, config.q_rewire, gc.seed);
        for (const std::string& fam : config.families) {
            gc.fams.push_back(make_family_context(fam, gc.graph, config));
            if (fam == "monic_cubic") {
                const WaveletBank& bank = *gc.fams.back().bank;
                gc.bound_B = bank.frame_bounds().upper;
                gc.bound_C = bank.lipschitz();
                emit_bound = true;
            }
        }
    }

    const std::int64_t cells = static_cast<std::int64_t>(n_g) * n_eps * n_r;
    std::vector<double> err(static_cast<std::size_t>(cells * n_fam), kNaN);
    std::vector<char> skipped(static_cast<std::size_t>(cells), 0);
    int warn_count = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : warn_count)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const int g = static_cast<int>(cell / (static_cast<std::int64_t>(n_eps) * n_r));
        const int rem = static_cast<int>(cell % (static_cast<std::int64_t>(n_eps) * n_r));
        const int e = rem / n_r;
        const int r = rem % n_r;
        const GraphCtx& gc = graphs[static_cast<std::size_t>(g)];
        std::vector<double> local(static_cast<std::size_t>(n_fam), kNaN);
        try {
            const double eps = eps_values[static_cast<std::size_t>(e)];
            if (eps == 0.0) {
                // Unperturbed sanity cell: the operator is untouched.
                std::fill(local.begin(), local.end(), 0.0);
            } else {
                const ErrorMatrix em = dilation_error(
                    config.n, eps,
                    derive_seed(config.seed, {12, static_cast<std::uint64_t>(g),
                                              static_cast<std::uint64_t>(e),
                                              static_cast<std::uint64_t>(r)}));
                const PerturbedGraph pg = perturb_adjacency(gc.graph, em);
                const Eigen::MatrixXd x = gaussian_matrix(
                    config.n, config.n_signals,
                    derive_seed(config.seed, {13, static_cast<std::uint64_t>(g),
                                              static_cast<std::uint64_t>(e),
                                              static_cast<std::uint64_t>(r)}));
                for (int f = 0; f < n_fam; ++f) {
                    const FamilyContext& ctx = gc.fams[static_cast<std::size_t>(f)];
                    const ShiftOperator shift_hat =
                        build_shift(pg.graph, ctx.shift.variant());
                    if (ctx.is_gft) {
                        const Eigen::MatrixXd ref =
                            eigendecompose(ctx.shift).eigenvectors.transpose() * x;
                        const Eigen::MatrixXd alt =
                            eigendecompose(shift_hat).eigenvectors.transpose() * x;
                        local[static_cast<std::size_t>(f)] = mean_rel_error(ref, alt);
                    } else {
                        const WaveletBank bank_hat = reinstantiate(*ctx.bank, shift_hat);
                        const Aggregator agg_hat =
                            ctx.agg.kind == AggregatorKind::DegreeWeighted
                                ? make_degree_aggregator(pg.graph)
                                : ctx.agg;
                        const Eigen::MatrixXd ref = scatter_batch(*ctx.bank, ctx.agg, x, config.L);
                        const Eigen::MatrixXd alt = scatter_batch(bank_hat, agg_hat, x, config.L);
                        local[static_cast<std::size_t>(f)] = mean_rel_error(ref, alt);
                    }
                }
            }
            std::copy(local.begin(), local.end(),
                      err.begin() + static_cast<std::ptrdiff_t>(cell * n_fam));
        } catch (const std::exception&) {
            skipped[static_cast<std::size_t>(cell)] = 1;
            ++warn_count;
        }
    }

    ExperimentResult result;
    result.warnings = warn_count;
    for (int g = 0; g < n_g; ++g) {
        for (int e = 0; e < n_eps; ++e) {
            for (int r = 0; r < n_r; ++r) {
                const std::int64_t cell = (static_cast<std::int64_t>(g) * n_eps + e) * n_r + r;
                if (skipped[static_cast<std::size_t>(cell)]) continue;
                for (int f = 0; f < n_fam; ++f) {
                    ExperimentRecord rec;
                    rec.experiment = exp_name;
                    rec.family = config.families[static_cast<std::size_t>(f)];
                    rec.sweep_value = eps_values[static_cast<std::size_t>(e)];
                    rec.graph_seed = graphs[static_cast<std::size_t>(g)].seed;
                    rec.trial = r;
                    rec.metric_name = "rel_error";
                    rec.metric_value = err[static_cast<std::size_t>(cell * n_fam + f)];
                    result.records.push_back(std::move(rec));
                }
            }
        }
    }
    if (emit_bound) {
        for (int g = 0; g < n_g; ++g) {
            const GraphCtx& gc = graphs[static_cast<std::size_t>(g)];
            for (int e = 0; e < n_eps; ++e) {
                ExperimentRecord rec;
                rec.experiment = exp_name;
                rec.family = "monic_cubic";
                rec.sweep_value = eps_values[static_cast<std::size_t>(e)];
                rec.graph_seed = gc.seed;
                rec.trial = 0;
                rec.metric_name = "stability_bound";
                rec.metric_value = stability_bound(eps_values[static_cast<std::size_t>(e)],
                                                   gc.bound_C, gc.bound_B, config.J, config.L);
                result.records.push_back(std::move(rec));
            }
        }
    }

    // Per-graph means over realizations, then mean/std across graphs.
    for (int f = 0; f < n_fam; ++f) {
        for (int e = 0; e < n_eps; ++e) {
            std::vector<double> per_graph;
            for (int g = 0; g < n_g; ++g) {
                double total = 0.0;
                int used = 0;
                for (int r = 0; r < n_r; ++r) {
                    const std::int64_t cell =
                        (static_cast<std::int64_t>(g) * n_eps + e) * n_r + r;
                    if (skipped[static_cast<std::size_t>(cell)]) continue;
                    total += err[static_cast<std::size_t>(cell * n_fam + f)];
                    ++used;
                }
                if (used > 0) per_graph.push_back(total / used);
            }
            result.summary.push_back(summarize(exp_name,
                                               config.families[static_cast<std::size_t>(f)],
                                               eps_values[static_cast<std::size_t>(e)],
                                               "rel_error", per_graph));
        }
    }
    if (emit_bound) {
        for (int e = 0; e < n_eps; ++e) {
            std::vector<double> per_graph;
            for (int g = 0; g < n_g; ++g) {
                const GraphCtx& gc = graphs[static_cast<std::size_t>(g)];
                per_graph.push_back(stability_bound(eps_values[static_cast<std::size_t>(e)],
                                                    gc.bound_C, gc.bound_B, config.J, config.L));
            }
            result.summary.push_back(summarize(exp_name, "monic_cubic",
                                               eps_values[static_cast<std::size_t>(e)],
                                               "stability_bound", per_graph));
        }
    }
    append_skip_row(result, exp_name);
    return result;
}

ExperimentResult run_source_localization(const ExperimentConfig& config) {
    validate_config(config);
    Eigen::setNbThreads(1);
    const std::string exp_name = to_string(ExperimentKind::SourceLocalization);
    const std::uint64_t graph_seed = derive_seed(config.seed, {21, 0});
    const TwoCommunityGraph tc =
        generate_two_community(config.n, config.p_in, config.p_out, graph_seed);
    const Graph& graph = tc.graph;
    const int n = graph.size();
    int c0 = -1, c1 = -1;
    for (int i = 0; i < n; ++i) {
        if (tc.communities[static_cast<std::size_t>(i)] == 0 && c0 < 0) c0 = i;
        if (tc.communities[static_cast<std::size_t>(i)] == 1 && c1 < 0) c1 = i;
    }
    if (c0 < 0 || c1 < 0) throw DataError("two-community graph lacks one community");

    // All distinct diffused signals W^t delta_c, unit normalized; column c*t_max+t.
    const auto diffusion_dictionary = [&](const Eigen::MatrixXd& w) {
        Eigen::MatrixXd dict(n, 2 * config.t_max);
        const int sources[2] = {c0, c1};
        for (int c = 0; c < 2; ++c) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
            x(sources[c]) = 1.0;
            for (int t = 0; t < config.t_max; ++t) {
                const double nrm = x.norm();
                dict.col(static_cast<Eigen::Index>(c) * config.t_max + t) =
                    nrm > 0.0 ? (x / nrm).eval() : x;
                x = w * x;
            }
        }
        return dict;
    };

    std::vector<FamilyContext> fams;
    for (const std::string& name : config.families) {
        fams.push_back(make_family_context(name, graph, config));
    }
    const int n_fam = static_cast<int>(fams.size());

    const auto features_of = [&](const FamilyContext& ctx, const Eigen::MatrixXd& signals) {
        if (ctx.is_gft) {
            return gft_features(eigendecompose(ctx.shift), signals, config.gft_coeff_count,
                                config.gft_band);
        }
        return scatter_batch(*ctx.bank, ctx.agg, signals, config.L);
    };

    const Eigen::MatrixXd train_dict = diffusion_dictionary(graph.weights());
    // (community, time) draws shared by every family.
    const auto draw_samples = [&](int count, std::uint64_t seed) {
        std::mt19937_64 rng = make_rng(seed);
        std::uniform_int_distribution<int> pick_t(0, config.t_max - 1);
        std::vector<int> cols(static_cast<std::size_t>(count));
        Eigen::VectorXi labels(count);
        for (int i = 0; i < count; ++i) {
            const int c = i % 2;  // exact half split between the sources
            const int t = pick_t(rng);
            cols[static_cast<std::size_t>(i)] = c * config.t_max + t;
            labels(i) = c == 0 ? 1 : -1;
        }
        return std::make_pair(cols, labels);
    };
    const auto gather = [&](const Eigen::MatrixXd& feats, const std::vector<int>& cols) {
        Eigen::MatrixXd x(static_cast<Eigen::Index>(cols.size()), feats.rows());
        for (std::size_t i = 0; i < cols.size(); ++i) {
            x.row(static_cast<Eigen::Index>(i)) = feats.col(cols[i]).transpose();
        }
        return x;
    };

    const auto [train_cols, train_labels] = draw_samples(config.n_train,
                                                         derive_seed(config.seed, {22, 0}));
    const double lambda =
        config.svm_lambda > 0.0 ? config.svm_lambda : 1.0 / static_cast<double>(config.n_train);

    ExperimentResult result;
    std::vector<SvmModel> models;
    for (int f = 0; f < n_fam; ++f) {
        const Eigen::MatrixXd feats = features_of(fams[static_cast<std::size_t>(f)], train_dict);
        Dataset train{gather(feats, train_cols), train_labels};
        models.push_back(train_svm(train, lambda, config.svm_epochs,
                                   derive_seed(config.seed, {23, static_cast<std::uint64_t>(f)})));
        ExperimentRecord rec;
        rec.experiment = exp_name;
        rec.family = fams[static_cast<std::size_t>(f)].name;
        rec.sweep_value = -1.0;  // not part of the p sweep
        rec.graph_seed = graph_seed;
        rec.trial = -1;
        rec.metric_name = "train_accuracy";
        rec.metric_value = accuracy(models.back(), train);
        result.records.push_back(std::move(rec));
    }

    const std::vector<double> p_values = config.p_range.values();
    const int n_p = static_cast<int>(p_values.size());
    const int n_r = config.n_trials;
    const std::int64_t cells = static_cast<std::int64_t>(n_p) * n_r;
    std::vector<double> acc(static_cast<std::size_t>(cells * n_fam), kNaN);
    std::vector<char> skipped(static_cast<std::size_t>(cells), 0);
    int warn_count = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : warn_count)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const int pi = static_cast<int>(cell / n_r);
        const int r = static_cast<int>(cell % n_r);
        std::vector<double> local(static_cast<std::size_t>(n_fam), kNaN);
        try {
            const double p = p_values[static_cast<std::size_t>(pi)];
            const EdgeDropResult dropped =
                edge_drop(graph, p,
                          derive_seed(config.seed, {24, static_cast<std::uint64_t>(pi),
                                                    static_cast<std::uint64_t>(r)}));
            const Eigen::MatrixXd test_dict = diffusion_dictionary(dropped.graph.weights());
            const auto [test_cols, test_labels] =
                draw_samples(config.n_test,
                             derive_seed(config.seed, {25, static_cast<std::uint64_t>(pi),
                                                       static_cast<std::uint64_t>(r)}));
            for (int f = 0; f < n_fam; ++f) {
                const Eigen::MatrixXd feats =
                    features_of(fams[static_cast<std::size_t>(f)], test_dict);
                Dataset test{gather(feats, test_cols), test_labels};
                local[static_cast<std::size_t>(f)] =
                    accuracy(models[static_cast<std::size_t>(f)], test);
            }
            std::copy(local.begin(), local.end(),
                      acc.begin() + static_cast<std::ptrdiff_t>(cell * n_fam));
        } catch (const std::exception&) {
            skipped[static_cast<std::size_t>(cell)] = 1;
            ++warn_count;
        }
    }

    result.warnings = warn_count;
    for (int pi = 0; pi < n_p; ++pi) {
        for (int r = 0; r < n_r; ++r) {
            const std::int64_t cell = static_cast<std::int64_t>(pi) * n_r + r;
            if (skipped[static_cast<std::size_t>(cell)]) continue;
            for (int f = 0; f < n_fam; ++f) {
                ExperimentRecord rec;
                rec.experiment = exp_name;
                rec.family = fams[static_cast<std::size_t>(f)].name;
                rec.sweep_value = p_values[static_cast<std::size_t>(pi)];
                rec.graph_seed = graph_seed;
                rec.trial = r;
                rec.metric_name = "accuracy";
                rec.metric_value = acc[static_cast<std::size_t>(cell * n_fam + f)];
                result.records.push_back(std::move(rec));
            }
        }
    }
    for (int f = 0; f < n_fam; ++f) {
        for (int pi = 0; pi < n_p; ++pi) {
            std::vector<double> values;
            for (int r = 0; r < n_r; ++r) {
                const std::int64_t cell = static_cast<std::int64_t>(pi) * n_r + r;
                if (skipped[static_cast<std::size_t>(cell)]) continue;
                values.push_back(acc[static_cast<std::size_t>(cell * n_fam + f)]);
            }
            result.summary.push_back(summarize(exp_name, fams[static_cast<std::size_t>(f)].name,
                                               p_values[static_cast<std::size_t>(pi)], "accuracy",
                                               values));
        }
    }
    append_skip_row(result, exp_name);
    return result;
}

ExperimentResult run_authorship(const ExperimentConfig& config, const Corpus& positive,
                                const Corpus& negative, const WordList& words) {
    validate_config(config);
    Eigen::setNbThreads(1);
    const std::string exp_name = to_string(ExperimentKind::Authorship);
    const std::vector<std::vector<std::string>> pos_ex = corpus_excerpts(positive);
    const std::vector<std::vector<std::string>> neg_ex = corpus_excerpts(negative);
    if (pos_ex.empty()) throw EmptyCorpusError("positive corpus has no excerpts");
    if (neg_ex.empty()) throw EmptyCorpusError("negative corpus has no excerpts");
    if (neg_ex.size() < pos_ex.size()) {
        throw InsufficientCorpusError(
            "need at least as many negative excerpts as positive ones: have " +
            std::to_string(neg_ex.size()) + " vs " + std::to_string(pos_ex.size()));
    }
    const int n_pos = static_cast<int>(pos_ex.size());
    if (n_pos < 2) throw InsufficientCorpusError("need at least two positive excerpts");

    const std::vector<double> ratios = config.split_range.values();
    const int n_ratio = static_cast<int>(ratios.size());
    const int n_r = config.n_trials;
    const int n_fam = static_cast<int>(config.families.size());
    const std::int64_t cells = static_cast<std::int64_t>(n_ratio) * n_r;
    std::vector<double> acc(static_cast<std::size_t>(cells * n_fam), kNaN);
    std::vector<std::uint64_t> cell_seed(static_cast<std::size_t>(cells), 0);
    std::vector<char> skipped(static_cast<std::size_t>(cells), 0);
    int warn_count = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : warn_count)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const int si = static_cast<int>(cell / n_r);
        const int r = static_cast<int>(cell % n_r);
        const std::uint64_t seed = derive_seed(
            config.seed, {31, static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(r)});
        cell_seed[static_cast<std::size_t>(cell)] = seed;
        std::vector<double> local(static_cast<std::size_t>(n_fam), kNaN);
        try {
            const double ratio = ratios[static_cast<std::size_t>(si)];
            std::mt19937_64 rng = make_rng(seed);
            std::vector<int> perm_pos(pos_ex.size());
            std::vector<int> perm_neg(neg_ex.size());
            std::iota(perm_pos.begin(), perm_pos.end(), 0);
            std::iota(perm_neg.begin(), perm_neg.end(), 0);
            std::shuffle(perm_pos.begin(), perm_pos.end(), rng);
            std::shuffle(perm_neg.begin(), perm_neg.end(), rng);
            const int n_train_pos = std::clamp(
                static_cast<int>(std::lround(ratio * n_pos)), 1, n_pos - 1);
            const int n_test_pos = n_pos - n_train_pos;

            std::vector<std::vector<std::string>> train_texts;
            train_texts.reserve(static_cast<std::size_t>(n_train_pos));
            for (int i = 0; i < n_train_pos; ++i) {
                train_texts.push_back(pos_ex[static_cast<std::size_t>(perm_pos[i])]);
            }
            const WanResult wan = build_wan(train_texts, words, config.window, config.decay);
            const std::vector<std::string>& kept = wan.graph.labels();
            const int dim = wan.graph.size();

            const auto signal_matrix = [&](const std::vector<int>& pos_idx, int pos_from,
                                           int pos_count, const std::vector<int>& neg_idx,
                                           int neg_from, int neg_count) {
                Eigen::MatrixXd x(dim, pos_count + neg_count);
                Eigen::VectorXi y(pos_count + neg_count);
                for (int i = 0; i < pos_count; ++i) {
                    x.col(i) = frequency_signal(
                        pos_ex[static_cast<std::size_t>(pos_idx[pos_from + i])], kept);
                    y(i) = 1;
                }
                for (int i = 0; i < neg_count; ++i) {
                    x.col(pos_count + i) = frequency_signal(
                        neg_ex[static_cast<std::size_t>(neg_idx[neg_from + i])], kept);
                    y(pos_count + i) = -1;
                }
                return std::make_pair(x, y);
            };
            const auto [train_x, train_y] =
                signal_matrix(perm_pos, 0, n_train_pos, perm_neg, 0, n_train_pos);
            const auto [test_x, test_y] = signal_matrix(perm_pos, n_train_pos, n_test_pos,
                                                        perm_neg, n_train_pos, n_test_pos);
            const double lambda = config.svm_lambda > 0.0
                                      ? config.svm_lambda
                                      : 1.0 / static_cast<double>(train_x.cols());

            for (int f = 0; f < n_fam; ++f) {
                const FamilyContext ctx =
                    make_family_context(config.families[static_cast<std::size_t>(f)], wan.graph,
                                        config);
                Eigen::MatrixXd train_feats, test_feats;
                if (ctx.is_gft) {
                    const Spectrum& spec = eigendecompose(ctx.shift);
                    train_feats = gft_features(spec, train_x, config.gft_coeff_count,
                                               config.gft_band);
                    test_feats = gft_features(spec, test_x, config.gft_coeff_count,
                                              config.gft_band);
                } else {
                    train_feats = scatter_batch(*ctx.bank, ctx.agg, train_x, config.L);
                    test_feats = scatter_batch(*ctx.bank, ctx.agg, test_x, config.L);
                }
                Dataset train{train_feats.transpose(), train_y};
                Dataset test{test_feats.transpose(), test_y};
                const SvmModel model = train_svm(
                    train, lambda, config.svm_epochs,
                    derive_seed(config.seed, {32, static_cast<std::uint64_t>(si),
                                              static_cast<std::uint64_t>(r),
                                              static_cast<std::uint64_t>(f)}));
                local[static_cast<std::size_t>(f)] = accuracy(model, test);
            }
            std::copy(local.begin(), local.end(),
                      acc.begin() + static_cast<std::ptrdiff_t>(cell * n_fam));
        } catch (const std::exception&) {
            skipped[static_cast<std::size_t>(cell)] = 1;
            ++warn_count;
        }
    }

    ExperimentResult result;
    result.warnings = warn_count;
    for (int si = 0; si < n_ratio; ++si) {
        for (int r = 0; r < n_r; ++r) {
            const std::int64_t cell = static_cast<std::int64_t>(si) * n_r + r;
            if (skipped[static_cast<std::size_t>(cell)]) continue;
            for (int f = 0; f < n_fam; ++f) {
                ExperimentRecord rec;
                rec.experiment = exp_name;
                rec.family = config.families[static_cast<std::size_t>(f)];
                rec.sweep_value = ratios[static_cast<std::size_t>(si)];
                rec.graph_seed = cell_seed[static_cast<std::size_t>(cell)];
                rec.trial = r;
                rec.metric_name = "accuracy";
                rec.metric_value = acc[static_cast<std::size_t>(cell * n_fam + f)];
                result.records.push_back(std::move(rec));
            }
        }
    }
    for (int f = 0; f < n_fam; ++f) {
        for (int si = 0; si < n_ratio; ++si) {
            std::vector<double> values;
            for (int r = 0; r < n_r; ++r) {
                const std::int64_t cell = static_cast<std::int64_t>(si) * n_r + r;
                if (skipped[static_cast<std::size_t>(cell)]) continue;
                values.push_back(acc[static_cast<std::size_t>(cell * n_fam + f)]);
            }
            result.summary.push_back(summarize(exp_name,
                                               config.families[static_cast<std::size_t>(f)],
                                               ratios[static_cast<std::size_t>(si)], "accuracy",
                                               values));
        }
    }
    append_skip_row(result, exp_name);
    return result;
}

ExperimentResult run_bound_check(const ExperimentConfig& config) {
    validate_config(config);
    Eigen::setNbThreads(1);
    const std::string exp_name = to_string(ExperimentKind::BoundCheck);
    std::vector<std::string> families;
    for (const std::string& f : config.families) {
        if (f != "gft") families.push_back(f);
    }
    if (families.empty()) throw ConfigError("bound check needs at least one wavelet family");
    const int n_fam = static_cast<int>(families.size());

    std::vector<std::string> metric_names = {"wavelet_diff_max", "wavelet_bound"};
    for (int l = 0; l < config.L; ++l) {
        metric_names.push_back("coeff_diff_max_l" + std::to_string(l));
        metric_names.push_back("coeff_bound_l" + std::to_string(l));
    }
    metric_names.push_back("rep_diff_max");
    metric_names.push_back("rep_bound");
    const int n_metric = static_cast<int>(metric_names.size());

    const std::vector<double> eps_values = config.eps_range.values();
    const int n_eps = static_cast<int>(eps_values.size());
    const int n_g = config.n_graphs;
    const int n_r = config.n_perturbations;

    struct GraphCtx {
        std::uint64_t seed = 0;
        Graph graph;
        std::vector<FamilyContext> fams;
        std::vector<double> B, C;
    };
    std::vector<GraphCtx> graphs(static_cast<std::size_t>(n_g));
    for (int g = 0; g < n_g; ++g) {
        GraphCtx& gc = graphs[static_cast<std::size_t>(g)];
        gc.seed = derive_seed(config.seed, {41, static_cast<std::uint64_t>(g)});
        gc.graph = generate_small_world(config.n, config.p_edge, config.q_rewire, gc.seed);
        for (const std::string& fam : families) {
            gc.fams.push_back(make_family_context(fam, gc.graph, config));
            gc.B.push_back(gc.fams.back().bank->frame_bounds().upper);
            gc.C.push_back(gc.fams.back().bank->lipschitz());
        }
    }

    // Path layout: layer l spans rows layer_offset[l] .. layer_offset[l]+J^l-1.
    std::vector<std::int64_t> layer_offset(static_cast<std::size_t>(config.L) + 1, 0);
    std::vector<std::int64_t> layer_size(static_cast<std::size_t>(config.L), 0);
    {
        std::int64_t offset = 0, width = 1;
        for (int l = 0; l < config.L; ++l) {
            layer_offset[static_cast<std::size_t>(l)] = offset;
            layer_size[static_cast<std::size_t>(l)] = width;
            offset += width;
            width *= config.J;
        }
        layer_offset[static_cast<std::size_t>(config.L)] = offset;
    }

    const std::int64_t cells = static_cast<std::int64_t>(n_g) * n_eps * n_r;
    std::vector<double> metrics(static_cast<std::size_t>(cells * n_fam * n_metric), kNaN);
    std::vector<std::string> violation(static_cast<std::size_t>(cells));
    std::vector<char> skipped(static_cast<std::size_t>(cells), 0);
    int warn_count = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : warn_count)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const int g = static_cast<int>(cell / (static_cast<std::int64_t>(n_eps) * n_r));
        const int rem = static_cast<int>(cell % (static_cast<std::int64_t>(n_eps) * n_r));
        const int e = rem / n_r;
        const int r = rem % n_r;
        const GraphCtx& gc = graphs[static_cast<std::size_t>(g)];
        std::vector<double> local(static_cast<std::size_t>(n_fam * n_metric), kNaN);
        try {
            const double eps = eps_values[static_cast<std::size_t>(e)];
            if (eps == 0.0) {
                std::fill(local.begin(), local.end(), 0.0);
            } else {
                const ErrorMatrix em = dilation_error(
                    config.n, eps,
                    derive_seed(config.seed, {42, static_cast<std::uint64_t>(g),
                                              static_cast<std::uint64_t>(e),
                                              static_cast<std::uint64_t>(r)}));
                const Eigen::MatrixXd x = gaussian_matrix(
                    config.n, config.n_signals,
                    derive_seed(config.seed, {44, static_cast<std::uint64_t>(g),
                                              static_cast<std::uint64_t>(e),
                                              static_cast<std::uint64_t>(r)}));
                Eigen::VectorXd col_norms(x.cols());
                for (Eigen::Index c = 0; c < x.cols(); ++c) col_norms(c) = x.col(c).norm();

                const PerturbedGraph pg = perturb_adjacency(gc.graph, em);
                for (int f = 0; f < n_fam; ++f) {
                    const FamilyContext& ctx = gc.fams[static_cast<std::size_t>(f)];
                    const double B = gc.B[static_cast<std::size_t>(f)];
                    const double C = gc.C[static_cast<std::size_t>(f)];
                    const ShiftOperator shift_hat = build_shift(pg.graph, ctx.shift.variant());
                    const WaveletBank bank_hat = reinstantiate(*ctx.bank, shift_hat);
                    double* m = local.data() + static_cast<std::ptrdiff_t>(f) * n_metric;

                    double wdiff = 0.0;
                    for (int j = 1; j <= config.J; ++j) {
                        const OperatorDifference od = wavelet_output_difference(
                            *ctx.bank, bank_hat, j, 5,
                            derive_seed(config.seed,
                                        {43, static_cast<std::uint64_t>(g),
                                         static_cast<std::uint64_t>(e),
                                         static_cast<std::uint64_t>(r),
                                         static_cast<std::uint64_t>(f),
                                         static_cast<std::uint64_t>(j)}));
                        wdiff = std::max(wdiff, od.exact);
                    }
                    const double wbound =
                        eps * C + config.quad_slack * (eps * C) * (eps * C);
                    m[0] = wdiff;
                    m[1] = wbound;

                    const Eigen::MatrixXd ref = scatter_batch(*ctx.bank, ctx.agg, x, config.L);
                    const Eigen::MatrixXd alt = scatter_batch(bank_hat, ctx.agg, x, config.L);
                    const Eigen::MatrixXd diff = (ref - alt).cwiseAbs();
                    for (int l = 0; l < config.L; ++l) {
                        double worst = 0.0;
                        for (Eigen::Index c = 0; c < x.cols(); ++c) {
                            const double block =
                                diff.block(layer_offset[static_cast<std::size_t>(l)], c,
                                           layer_size[static_cast<std::size_t>(l)], 1)
                                    .maxCoeff();
                            worst = std::max(worst, block / col_norms(c));
                        }
                        m[2 + 2 * l] = worst;
                        m[3 + 2 * l] = coefficient_bound(eps, C, B, l);
                    }
                    double rep_worst = 0.0;
                    for (Eigen::Index c = 0; c < x.cols(); ++c) {
                        rep_worst =
                            std::max(rep_worst, (ref.col(c) - alt.col(c)).norm() / col_norms(c));
                    }
                    m[2 + 2 * config.L] = rep_worst;
                    m[3 + 2 * config.L] = stability_bound(eps, C, B, config.J, config.L);

                    // Bound-vs-empirical audit for this family's cell.
                    const double slack = config.bound_slack;
                    const auto flag = [&](const std::string& what, double value, double bound) {
                        if (value > bound * (1.0 + slack) + 1e-12 &&
                            violation[static_cast<std::size_t>(cell)].empty()) {
                            violation[static_cast<std::size_t>(cell)] =
                                ctx.name + " " + what + " at eps=" + fmt17(eps) + " graph=" +
                                std::to_string(g) + " trial=" + std::to_string(r) + ": " +
                                fmt17(value) + " > " + fmt17(bound);
                        }
                    };
                    flag("wavelet_diff", wdiff, wbound);
                    for (int l = 0; l < config.L; ++l) {
                        flag("coeff_diff_l" + std::to_string(l), m[2 + 2 * l], m[3 + 2 * l]);
                    }
                    flag("rep_diff", rep_worst, m[3 + 2 * config.L]);
                }
            }
            std::copy(local.begin(), local.end(),
                      metrics.begin() + static_cast<std::ptrdiff_t>(cell * n_fam * n_metric));
        } catch (const std::exception&) {
            skipped[static_cast<std::size_t>(cell)] = 1;
            ++warn_count;
        }
    }

    ExperimentResult result;
    result.warnings = warn_count;
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        if (!violation[static_cast<std::size_t>(cell)].empty()) {
            result.first_violation = violation[static_cast<std::size_t>(cell)];
            break;
        }
    }
    for (int g = 0; g < n_g; ++g) {
        for (int e = 0; e < n_eps; ++e) {
            for (int r = 0; r < n_r; ++r) {
                const std::int64_t cell = (static_cast<std::int64_t>(g) * n_eps + e) * n_r + r;
                if (skipped[static_cast<std::size_t>(cell)]) continue;
                for (int f = 0; f < n_fam; ++f) {
                    for (int mi = 0; mi < n_metric; ++mi) {
                        ExperimentRecord rec;
                        rec.experiment = exp_name;
                        rec.family = families[static_cast<std::size_t>(f)];
                        rec.sweep_value = eps_values[static_cast<std::size_t>(e)];
                        rec.graph_seed = graphs[static_cast<std::size_t>(g)].seed;
                        rec.trial = r;
                        rec.metric_name = metric_names[static_cast<std::size_t>(mi)];
                        rec.metric_value =
                            metrics[static_cast<std::size_t>((cell * n_fam + f) * n_metric + mi)];
                        result.records.push_back(std::move(rec));
                    }
                }
            }
        }
    }
    for (int f = 0; f < n_fam; ++f) {
        for (int e = 0; e < n_eps; ++e) {
            for (int mi = 0; mi < n_metric; ++mi) {
                std::vector<double> values;
                for (int g = 0; g < n_g; ++g) {
                    for (int r = 0; r < n_r; ++r) {
                        const std::int64_t cell =
                            (static_cast<std::int64_t>(g) * n_eps + e) * n_r + r;
                        if (skipped[static_cast<std::size_t>(cell)]) continue;
                        values.push_back(metrics[static_cast<std::size_t>(
                            (cell * n_fam + f) * n_metric + mi)]);
                    }
                }
                result.summary.push_back(summarize(exp_name, families[static_cast<std::size_t>(f)],
                                                   eps_values[static_cast<std::size_t>(e)],
                                                   metric_names[static_cast<std::size_t>(mi)],
                                                   values));
            }
        }
    }
    append_skip_row(result, exp_name);
    return result;
}

void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "experiment,family,sweep_value,graph_seed,trial,metric_name,metric_value\n";
    for (const ExperimentRecord& rec : records) {
        out << rec.experiment << ',' << rec.family << ',' << fmt17(rec.sweep_value) << ','
            << rec.graph_seed << ',' << rec.trial << ',' << rec.metric_name << ','
            << fmt17(rec.metric_value) << '\n';
    }
}

void write_summary_csv(const std::vector<SummaryRow>& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "experiment,family,sweep_value,metric_name,mean,std,count\n";
    for (const SummaryRow& row : summary) {
        out << row.experiment << ',' << row.family << ',' << fmt17(row.sweep_value) << ','
            << row.metric_name << ',' << fmt17(row.mean) << ',' << fmt17(row.stddev) << ','
            << row.count << '\n';
    }
}

void write_plotdata(const ExperimentResult& result, const std::string& dir) {
    // Metric -> families (first-appearance order) -> x -> (mean, std).
    std::vector<std::string> metrics;
    for (const SummaryRow& row : result.summary) {
        if (row.metric_name == "skipped_cells" || row.metric_name == "train_accuracy") continue;
        if (std::find(metrics.begin(), metrics.end(), row.metric_name) == metrics.end()) {
            metrics.push_back(row.metric_name);
        }
    }
    for (const std::string& metric : metrics) {
        std::vector<std::string> families;
        std::vector<double> xs;
        for (const SummaryRow& row : result.summary) {
            if (row.metric_name != metric) continue;
            if (std::find(families.begin(), families.end(), row.family) == families.end()) {
                families.push_back(row.family);
            }
            if (std::find(xs.begin(), xs.end(), row.sweep_value) == xs.end()) {
                xs.push_back(row.sweep_value);
            }
        }
        std::sort(xs.begin(), xs.end());
        std::ofstream out(dir + "/plotdata_" + metric + ".csv");
        if (!out) throw DataError("cannot open plotdata file for metric " + metric);
        out << "x";
        for (const std::string& fam : families) out << ',' << fam << "_mean," << fam << "_std";
        out << '\n';
        for (double x : xs) {
            out << fmt17(x);
            for (const std::string& fam : families) {
                bool found = false;
                for (const SummaryRow& row : result.summary) {
                    if (row.metric_name == metric && row.family == fam &&
                        row.sweep_value == x) {
                        out << ',' << fmt17(row.mean) << ',' << fmt17(row.stddev);
                        found = true;
                        break;
                    }
                }
                if (!found) out << ",,";
            }
            out << '\n';
        }
    }
}

void write_outputs(const ExperimentResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_records_csv(result.records, dir + "/records.csv");
    write_summary_csv(result.summary, dir + "/summary.csv");
    write_plotdata(result, dir);
}

} // namespace gsc
