// graphscatter: command-line front end for the graph scattering experiment
// runners, kernel inspection, and word-adjacency-network construction.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 bound violation,
// 4 data error.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "gsc/config.hpp"
#include "gsc/errors.hpp"
#include "gsc/experiments.hpp"
#include "gsc/generators.hpp"
#include "gsc/graph.hpp"
#include "gsc/rng.hpp"
#include "gsc/shift.hpp"
#include "gsc/wan.hpp"
#include "gsc/wavelets.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string corpus_dir;
    std::string words_path;
    std::uint64_t seed = 0;
    int threads = 0;
};

void add_common_flags(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_path,
                    "flat `key = value` config file (# comments allowed)");
    sub->add_option("--seed", o.seed, "override the master seed");
    sub->add_option("--out", o.out_dir, "override the output directory");
    sub->add_option("--threads", o.threads, "OpenMP worker thread count");
}

void add_corpus_flags(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--corpus", o.corpus_dir, "corpus directory");
    sub->add_option("--words", o.words_path, "word list file (one word per line)");
}

gsc::ExperimentConfig make_config(gsc::ExperimentKind kind, const CLI::App* sub,
                                  const CommonOpts& o) {
    gsc::ExperimentConfig cfg = gsc::default_config(kind);
    if (!o.config_path.empty()) gsc::load_config_file(cfg, o.config_path);
    if (sub->count("--seed") > 0) cfg.seed = o.seed;
    if (sub->count("--out") > 0) cfg.output_dir = o.out_dir;
    // --corpus/--words exist only on the corpus-consuming subcommands;
    // App::count throws on unknown option names.
    const CLI::Option* corpus = sub->get_option_no_throw("--corpus");
    if (corpus != nullptr && corpus->count() > 0) cfg.corpus_dir = o.corpus_dir;
    const CLI::Option* words = sub->get_option_no_throw("--words");
    if (words != nullptr && words->count() > 0) cfg.word_list_path = o.words_path;
    if (o.threads > 0) omp_set_num_threads(o.threads);
    gsc::validate_config(cfg);
    return cfg;
}

void report(const gsc::ExperimentResult& result, const std::string& out_dir) {
    std::cout << "wrote " << out_dir << "/records.csv (" << result.records.size()
              << " rows) and summary.csv (" << result.summary.size() << " rows)\n";
    if (result.warnings > 0) {
        std::cout << "warning: " << result.warnings << " cell(s) skipped\n";
    }
}

gsc::WaveletBank bank_for(const std::string& family, const gsc::ShiftOperator& shift,
                          int J) {
    if (family == "monic_cubic") return gsc::monic_cubic_bank(shift, J);
    if (family == "tight_hann") return gsc::tight_hann_bank(shift, J);
    if (family == "diffusion") return gsc::diffusion_bank(shift, J);
    throw gsc::ConfigError("unknown wavelet family '" + family + "'");
}

int run_dump_kernels(const gsc::ExperimentConfig& cfg) {
    gsc::Graph graph = gsc::generate_small_world(
        cfg.n, cfg.p_edge, cfg.q_rewire, gsc::derive_seed(cfg.seed, {11, 0}));
    std::filesystem::create_directories(cfg.output_dir);
    int written = 0;
    for (const std::string& family : cfg.families) {
        if (family == "gft") continue;
        gsc::ShiftVariant variant = family == "diffusion"
                                        ? gsc::ShiftVariant::LazyDiffusion
                                        : cfg.shift;
        gsc::ShiftOperator shift = gsc::build_shift(graph, variant);
        gsc::WaveletBank bank = bank_for(family, shift, cfg.J);
        Eigen::MatrixXd grid = gsc::kernel_grid(bank, cfg.kernel_grid_points);
        std::string path = cfg.output_dir + "/kernels_" + family + ".csv";
        std::ofstream out(path);
        if (!out) throw gsc::DataError("cannot open " + path + " for writing");
        out << "lambda";
        for (int j = 1; j <= bank.scale_count(); ++j) out << ",h_" << j;
        out << "\n";
        char buf[64];
        for (Eigen::Index r = 0; r < grid.rows(); ++r) {
            for (Eigen::Index c = 0; c < grid.cols(); ++c) {
                std::snprintf(buf, sizeof(buf), "%.17g", grid(r, c));
                out << (c ? "," : "") << buf;
            }
            out << "\n";
        }
        gsc::FrameBounds fb = bank.frame_bounds();
        std::cout << family << ": wrote " << path << "  (A=" << fb.lower
                  << ", B=" << fb.upper << ", C=" << bank.lipschitz() << ")\n";
        ++written;
    }
    if (written == 0) {
        throw gsc::ConfigError("dump-kernels: no wavelet families configured");
    }
    return 0;
}

int run_wan_build(const gsc::ExperimentConfig& cfg) {
    if (cfg.corpus_dir.empty()) {
        throw gsc::ConfigError("wan-build requires --corpus or the corpus_dir key");
    }
    if (cfg.word_list_path.empty()) {
        throw gsc::ConfigError("wan-build requires --words or the word_list_path key");
    }
    gsc::WordList words = gsc::load_word_list(cfg.word_list_path);
    gsc::Corpus corpus = gsc::load_corpus_dir(cfg.corpus_dir, cfg.excerpt_length);
    std::vector<std::vector<std::string>> excerpts = gsc::corpus_excerpts(corpus);
    gsc::WanResult wan = gsc::build_wan(excerpts, words, cfg.window, cfg.decay);
    std::filesystem::create_directories(cfg.output_dir);
    std::string edges_path = cfg.output_dir + "/wan_edges.csv";
    gsc::save_edge_list(wan.graph, edges_path);
    std::string labels_path = edges_path + ".labels";
    {
        std::ofstream out(labels_path);
        if (!out) throw gsc::DataError("cannot open " + labels_path + " for writing");
        for (const std::string& w : wan.graph.labels()) out << w << "\n";
    }
    std::string dropped_path = cfg.output_dir + "/wan_dropped.txt";
    {
        std::ofstream out(dropped_path);
        if (!out) throw gsc::DataError("cannot open " + dropped_path + " for writing");
        for (const std::string& w : wan.dropped_words) out << w << "\n";
    }
    std::cout << "wrote " << edges_path << " (" << wan.graph.size() << " nodes, "
              << wan.graph.edge_count() << " edges), node labels in "
              << labels_path << "\n";
    std::cout << wan.dropped_words.size() << " word(s) outside the largest "
              << "connected component listed in " << dropped_path << "\n";
    return 0;
}

int run_authorship_cmd(const gsc::ExperimentConfig& cfg) {
    if (cfg.corpus_dir.empty()) {
        throw gsc::ConfigError("authorship requires --corpus or the corpus_dir key");
    }
    if (cfg.word_list_path.empty()) {
        throw gsc::ConfigError("authorship requires --words or the word_list_path key");
    }
    gsc::WordList words = gsc::load_word_list(cfg.word_list_path);
    gsc::Corpus positive =
        gsc::load_corpus_dir(cfg.corpus_dir + "/pos", cfg.excerpt_length);
    gsc::Corpus negative =
        gsc::load_corpus_dir(cfg.corpus_dir + "/neg", cfg.excerpt_length);
    gsc::ExperimentResult result = gsc::run_authorship(cfg, positive, negative, words);
    gsc::write_outputs(result, cfg.output_dir);
    report(result, cfg.output_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph scattering transforms: stability sweeps, source "
                 "localization, authorship attribution, and bound checks"};
    app.require_subcommand(1);

    CommonOpts opts;
    CLI::App* stability = app.add_subcommand(
        "stability-sweep", "relative representation error vs dilation size");
    CLI::App* source_loc = app.add_subcommand(
        "source-loc", "source localization accuracy vs edge-drop probability");
    CLI::App* authorship = app.add_subcommand(
        "authorship", "authorship attribution accuracy vs training split ratio");
    CLI::App* bound_check = app.add_subcommand(
        "bound-check", "empirical perturbation errors vs theoretical bounds");
    CLI::App* dump_kernels = app.add_subcommand(
        "dump-kernels", "write per-family kernel grids as CSV");
    CLI::App* wan_build = app.add_subcommand(
        "wan-build", "build a word adjacency network from a text corpus");
    for (CLI::App* sub :
         {stability, source_loc, authorship, bound_check, dump_kernels, wan_build}) {
        add_common_flags(sub, opts);
    }
    add_corpus_flags(authorship, opts);
    add_corpus_flags(wan_build, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (stability->parsed()) {
            gsc::ExperimentConfig cfg =
                make_config(gsc::ExperimentKind::StabilitySweep, stability, opts);
            gsc::ExperimentResult result = gsc::run_stability_sweep(cfg);
            gsc::write_outputs(result, cfg.output_dir);
            report(result, cfg.output_dir);
            return 0;
        }
        if (source_loc->parsed()) {
            gsc::ExperimentConfig cfg =
                make_config(gsc::ExperimentKind::SourceLocalization, source_loc, opts);
            gsc::ExperimentResult result = gsc::run_source_localization(cfg);
            gsc::write_outputs(result, cfg.output_dir);
            report(result, cfg.output_dir);
            return 0;
        }
        if (authorship->parsed()) {
            return run_authorship_cmd(
                make_config(gsc::ExperimentKind::Authorship, authorship, opts));
        }
        if (bound_check->parsed()) {
            gsc::ExperimentConfig cfg =
                make_config(gsc::ExperimentKind::BoundCheck, bound_check, opts);
            gsc::ExperimentResult result = gsc::run_bound_check(cfg);
            gsc::write_outputs(result, cfg.output_dir);
            report(result, cfg.output_dir);
            if (!result.first_violation.empty()) {
                std::cerr << "bound violation: " << result.first_violation << "\n";
                return 3;
            }
            return 0;
        }
        if (dump_kernels->parsed()) {
            return run_dump_kernels(
                make_config(gsc::ExperimentKind::StabilitySweep, dump_kernels, opts));
        }
        if (wan_build->parsed()) {
            return run_wan_build(
                make_config(gsc::ExperimentKind::Authorship, wan_build, opts));
        }
    } catch (const gsc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gsc::BoundViolationError& e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return 3;
    } catch (const gsc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
