#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsc/config.hpp"
#include "gsc/wan.hpp"

namespace gsc {

/// One CSV row of a sweep.
struct ExperimentRecord {
    std::string experiment;
    std::string family;
    double sweep_value = 0.0;
    std::uint64_t graph_seed = 0;
    int trial = 0;
    std::string metric_name;
    double metric_value = 0.0;
};

struct SummaryRow {
    std::string experiment;
    std::string family;
    double sweep_value = 0.0;
    std::string metric_name;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (0 for a single value)
    int count = 0;
};

struct ExperimentResult {
    std::vector<ExperimentRecord> records;
    std::vector<SummaryRow> summary;
    int warnings = 0;              // cells skipped after an error
    std::string first_violation;   // bound check: empty when every bound holds
};

/// Relative representation error of each wavelet family and of the full-size
/// GFT under random edge-weight dilations of small-world graphs, swept over
/// the dilation size. Also emits the theoretical error-bound curve for the
/// monic cubic family computed from its measured frame bound and Lipschitz
/// constant. Nesting: signals, then error realizations, then mean/std across
/// graphs.
ExperimentResult run_stability_sweep(const ExperimentConfig& config);

/// Two-community source localization: linear SVMs are trained on
/// representations of diffused deltas from the original graph and tested on
/// signals diffused over edge-dropped graphs (representations always use the
/// original operator), swept over the drop probability.
ExperimentResult run_source_localization(const ExperimentConfig& config);

/// Authorship attribution: per split ratio and random split, a word
/// co-occurrence graph is built from the positive training excerpts alone,
/// and SVMs on each representation classify positive vs negative excerpts.
ExperimentResult run_authorship(const ExperimentConfig& config, const Corpus& positive,
                                const Corpus& negative, const WordList& words);

/// Empirical filter/coefficient/representation differences against their
/// theoretical bounds for small dilations applied directly to the operator.
/// A violated bound is reported in first_violation.
ExperimentResult run_bound_check(const ExperimentConfig& config);

/// records.csv: experiment,family,sweep_value,graph_seed,trial,metric_name,metric_value.
void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

/// summary.csv: experiment,family,sweep_value,metric_name,mean,std,count.
void write_summary_csv(const std::vector<SummaryRow>& summary, const std::string& path);

/// plotdata_<metric>.csv per metric: x plus <family>_mean,<family>_std columns.
void write_plotdata(const ExperimentResult& result, const std::string& dir);

/// All of the above into `dir` (created if missing).
void write_outputs(const ExperimentResult& result, const std::string& dir);

} // namespace gsc
