#include "gsc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gsc/errors.hpp"

namespace gsc {

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::StabilitySweep: return "stability_sweep";
        case ExperimentKind::SourceLocalization: return "source_loc";
        case ExperimentKind::Authorship: return "authorship";
        case ExperimentKind::BoundCheck: return "bound_check";
    }
    return "unknown";
}

std::vector<double> SweepRange::values() const {
    if (points < 1) throw ConfigError("sweep needs at least one point");
    if (log_spacing && !(lo > 0.0)) throw ConfigError("log spacing requires lo > 0");
    if (hi < lo) throw ConfigError("sweep hi must be >= lo");
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    if (log_spacing) {
        const double llo = std::log(lo);
        const double lhi = std::log(hi);
        for (int i = 0; i < points; ++i) {
            out[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (points - 1));
        }
        out.back() = hi;  // exact endpoint despite rounding
    } else {
        for (int i = 0; i < points; ++i) {
            out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
        }
        out.back() = hi;
    }
    return out;
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig config;
    config.experiment = kind;
    config.families = {"monic_cubic", "tight_hann", "diffusion", "gft"};
    switch (kind) {
        case ExperimentKind::StabilitySweep:
            config.n = 100;
            config.n_graphs = 10;
            config.n_perturbations = 10;
            config.n_signals = 1000;
            break;
        case ExperimentKind::SourceLocalization:
            config.n = 234;
            config.gft_band = GftBand::BandPass;
            break;
        case ExperimentKind::Authorship:
            config.gft_band = GftBand::LowPass;
            config.shift = ShiftVariant::NormalizedLaplacian;
            break;
        case ExperimentKind::BoundCheck:
            config.n = 100;
            config.n_graphs = 2;
            config.n_perturbations = 3;
            config.n_signals = 50;
            config.eps_range = SweepRange{0.01, 0.1, 5, false};
            break;
    }
    return config;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' needs an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' needs a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' needs an unsigned integer, got '" + value + "'");
    }
}

SweepRange parse_range(const std::string& key, const std::string& value) {
    std::vector<std::string> parts;
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 4) {
        throw ConfigError("key '" + key + "' needs lo:hi:points:linear|log, got '" + value + "'");
    }
    SweepRange range;
    range.lo = parse_double(key, parts[0]);
    range.hi = parse_double(key, parts[1]);
    range.points = parse_int(key, parts[2]);
    if (parts[3] == "linear") {
        range.log_spacing = false;
    } else if (parts[3] == "log") {
        range.log_spacing = true;
    } else {
        throw ConfigError("key '" + key + "' spacing must be linear or log, got '" + parts[3] + "'");
    }
    return range;
}

ShiftVariant parse_shift(const std::string& value) {
    if (value == "adjacency") return ShiftVariant::Adjacency;
    if (value == "laplacian") return ShiftVariant::Laplacian;
    if (value == "normalized_laplacian") return ShiftVariant::NormalizedLaplacian;
    if (value == "lazy_diffusion") return ShiftVariant::LazyDiffusion;
    throw ConfigError("unknown shift '" + value + "'");
}

ExperimentKind parse_experiment(const std::string& value) {
    if (value == "stability_sweep") return ExperimentKind::StabilitySweep;
    if (value == "source_loc") return ExperimentKind::SourceLocalization;
    if (value == "authorship") return ExperimentKind::Authorship;
    if (value == "bound_check") return ExperimentKind::BoundCheck;
    throw ConfigError("unknown experiment '" + value + "'");
}

std::vector<std::string> parse_families(const std::string& value) {
    std::vector<std::string> families;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item != "monic_cubic" && item != "tight_hann" && item != "diffusion" &&
            item != "gft") {
            throw ConfigError("unknown family '" + item + "'");
        }
        if (std::find(families.begin(), families.end(), item) != families.end()) {
            throw ConfigError("family '" + item + "' listed twice");
        }
        families.push_back(item);
    }
    if (families.empty()) throw ConfigError("family list is empty");
    return families;
}

} // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "experiment") config.experiment = parse_experiment(value);
    else if (key == "family") config.families = parse_families(value);
    else if (key == "J") config.J = parse_int(key, value);
    else if (key == "L") config.L = parse_int(key, value);
    else if (key == "n_graphs") config.n_graphs = parse_int(key, value);
    else if (key == "n_perturbations") config.n_perturbations = parse_int(key, value);
    else if (key == "n_signals") config.n_signals = parse_int(key, value);
    else if (key == "n_trials") config.n_trials = parse_int(key, value);
    else if (key == "eps_range") config.eps_range = parse_range(key, value);
    else if (key == "p_range") config.p_range = parse_range(key, value);
    else if (key == "split_range") config.split_range = parse_range(key, value);
    else if (key == "seed") config.seed = parse_u64(key, value);
    else if (key == "gft_coeff_count") config.gft_coeff_count = parse_int(key, value);
    else if (key == "gft_band") {
        if (value == "lowpass") config.gft_band = GftBand::LowPass;
        else if (value == "bandpass") config.gft_band = GftBand::BandPass;
        else throw ConfigError("gft_band must be lowpass or bandpass, got '" + value + "'");
    }
    else if (key == "output_dir") config.output_dir = value;
    else if (key == "shift") config.shift = parse_shift(value);
    else if (key == "n") config.n = parse_int(key, value);
    else if (key == "p_edge") config.p_edge = parse_double(key, value);
    else if (key == "q_rewire") config.q_rewire = parse_double(key, value);
    else if (key == "p_in") config.p_in = parse_double(key, value);
    else if (key == "p_out") config.p_out = parse_double(key, value);
    else if (key == "t_max") config.t_max = parse_int(key, value);
    else if (key == "n_train") config.n_train = parse_int(key, value);
    else if (key == "n_test") config.n_test = parse_int(key, value);
    else if (key == "window") config.window = parse_int(key, value);
    else if (key == "decay") config.decay = parse_double(key, value);
    else if (key == "excerpt_length") config.excerpt_length = parse_int(key, value);
    else if (key == "svm_lambda") config.svm_lambda = parse_double(key, value);
    else if (key == "svm_epochs") config.svm_epochs = parse_int(key, value);
    else if (key == "bound_slack") config.bound_slack = parse_double(key, value);
    else if (key == "quad_slack") config.quad_slack = parse_double(key, value);
    else if (key == "corpus_dir") config.corpus_dir = value;
    else if (key == "word_list_path") config.word_list_path = value;
    else if (key == "kernel_grid_points") config.kernel_grid_points = parse_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        }
        apply_config_entry(config, key, value);
    }
}

void validate_config(const ExperimentConfig& config) {
    if (config.J < 2) throw ConfigError("J must be >= 2");
    if (config.L < 1) throw ConfigError("L must be >= 1");
    if (config.n_graphs < 1) throw ConfigError("n_graphs must be >= 1");
    if (config.n_perturbations < 1) throw ConfigError("n_perturbations must be >= 1");
    if (config.n_signals < 1) throw ConfigError("n_signals must be >= 1");
    if (config.n_trials < 1) throw ConfigError("n_trials must be >= 1");
    if (config.n < 2) throw ConfigError("n must be >= 2");
    if (config.gft_coeff_count < 1) throw ConfigError("gft_coeff_count must be >= 1");
    if (config.t_max < 1) throw ConfigError("t_max must be >= 1");
    if (config.n_train < 2 || config.n_test < 1) {
        throw ConfigError("n_train must be >= 2 and n_test >= 1");
    }
    if (config.window < 1) throw ConfigError("window must be >= 1");
    if (!(config.decay > 0.0) || config.decay > 1.0) throw ConfigError("decay must be in (0, 1]");
    if (config.excerpt_length < 1) throw ConfigError("excerpt_length must be >= 1");
    if (config.svm_lambda < 0.0) throw ConfigError("svm_lambda must be >= 0");
    if (config.svm_epochs < 1) throw ConfigError("svm_epochs must be >= 1");
    if (config.bound_slack < 0.0 || config.quad_slack < 0.0) {
        throw ConfigError("slack values must be >= 0");
    }
    if (config.kernel_grid_points < 2) throw ConfigError("kernel_grid_points must be >= 2");
    // Trips range errors (hi < lo, bad log spacing) eagerly.
    config.eps_range.values();
    config.p_range.values();
    config.split_range.values();
    if (config.families.empty()) throw ConfigError("family list is empty");
}

} // namespace gsc
