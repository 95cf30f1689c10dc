#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsc/shift.hpp"

namespace gsc {

enum class ExperimentKind { StabilitySweep, SourceLocalization, Authorship, BoundCheck };

std::string to_string(ExperimentKind kind);

enum class GftBand { LowPass, BandPass };

/// Sweep specification `lo:hi:points:linear|log`; log spacing needs lo > 0.
struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
    int points = 1;
    bool log_spacing = false;

    std::vector<double> values() const;
};

/// Every field is addressable from the config file as `key = value`; unknown
/// keys are rejected. Defaults depend on the experiment (see
/// default_config).
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::StabilitySweep;
    std::vector<std::string> families;  // subset of monic_cubic, tight_hann, diffusion, gft
    int J = 6;
    int L = 3;
    int n_graphs = 10;
    int n_perturbations = 10;
    int n_signals = 1000;
    int n_trials = 20;
    SweepRange eps_range{0.1, 1.0, 10, false};
    SweepRange p_range{0.01, 0.3, 10, true};
    SweepRange split_range{0.2, 0.9, 10, false};
    std::uint64_t seed = 1;
    int gft_coeff_count = 43;
    GftBand gft_band = GftBand::BandPass;
    std::string output_dir = "out";
    ShiftVariant shift = ShiftVariant::NormalizedLaplacian;
    int n = 100;
    double p_edge = 0.5;
    double q_rewire = 0.1;
    double p_in = 0.2;
    double p_out = 0.02;
    int t_max = 20;
    int n_train = 1000;
    int n_test = 200;
    int window = 10;
    double decay = 0.8;
    int excerpt_length = 1000;
    double svm_lambda = 0.0;  // 0 means 1/M
    int svm_epochs = 100;
    double bound_slack = 1e-6;
    double quad_slack = 0.5;
    std::string corpus_dir;
    std::string word_list_path;
    int kernel_grid_points = 1000;
};

/// Paper-protocol defaults for each experiment.
ExperimentConfig default_config(ExperimentKind kind);

/// Applies one `key = value` assignment; ConfigError on unknown keys or
/// unparseable values.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

/// Flat text config: `key = value` lines, `#` comments, blank lines ignored.
void load_config_file(ExperimentConfig& config, const std::string& path);

/// Range and count sanity checks; ConfigError when violated.
void validate_config(const ExperimentConfig& config);

} // namespace gsc
