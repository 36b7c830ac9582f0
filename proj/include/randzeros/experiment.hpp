#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randzeros/energy.hpp"
#include "randzeros/paircorr.hpp"
#include "randzeros/theory.hpp"

namespace randzeros {

struct PaircorrSettings {
    double max_u = 4.0;
    int bins = 40;
};

struct ExperimentConfig {
    std::vector<int> degrees;
    int trials = 0;
    std::uint64_t root_seed = 0;
    std::vector<double> s_values;
    bool include_green = true;
    bool include_log = true;
    std::optional<PaircorrSettings> paircorr;
    std::string output_dir;
    unsigned worker_count = 0; // 0 = hardware concurrency

    void validate() const; // throws DomainError on bad fields
};

// Parses the key = value / [table] config format documented in the README.
// Unknown keys are rejected.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

enum class DiscardReason { none, rootfind_nonconverged, degenerate };

struct TrialRecord {
    int degree = 0;
    std::uint64_t trial_index = 0;  // stream index; degree-major global counter
    bool root_converged = false;
    bool discarded = false;
    DiscardReason reason = DiscardReason::none;
    EnergyReport energies;
    double wall_ms = 0.0;           // informational only, excluded from the
                                    // determinism contract
};

struct TrialTable {
    ExperimentConfig config;
    std::vector<TrialRecord> records; // degree-major, trial order
    std::vector<PairHistogram> histograms; // one per degree when paircorr is on
};

struct KindSummary {
    int degree = 0;
    std::string kind;       // "green", "log", "s=<value>"
    int n_used = 0;
    int n_discarded = 0;
    double mean = 0.0;
    double standard_error = 0.0; // sample sd / sqrt(n_used)
    double min = 0.0;
    double max = 0.0;
    PredictorResult predictor;
    double residual = 0.0;        // mean - predictor.total
    std::string residual_scale;   // label of the normalizing power
    double residual_scaled = 0.0;
    std::optional<double> tail_threshold; // green only: Elkies bound + eps N ln N
    std::optional<double> tail_fraction;
};

struct SweepFit {
    std::string kind;
    std::string basis[2];
    double a = 0.0, a_stderr = 0.0;
    double b = 0.0, b_stderr = 0.0;
};

struct SummaryStats {
    std::vector<KindSummary> kinds;
    std::vector<SweepFit> fits;  // present when >= 3 degrees
    double max_discard_fraction = 0.0;
    bool healthy = true;         // false when any degree discards > 10%
};

struct ExperimentResult {
    TrialTable table;
    SummaryStats summary;
};

// Monte Carlo driver: for every degree and trial, sample -> roots -> sphere
// -> energies (+ optional pair histogram), then aggregate. Trials run in
// parallel; stream indices are fixed before dispatch and aggregation is an
// ordered fold, so results are identical for any worker count. Writes
// trials.csv and summary.json under config.output_dir (checked writable up
// front); pass write_outputs = false to keep everything in memory.
ExperimentResult run_trials(const ExperimentConfig& config, bool write_outputs = true);

// Fraction of non-discarded trials at `degree` whose `kind` energy is >=
// threshold. kind is "green", "log" or "s=<value>" as in KindSummary.
double tail_fraction(const TrialTable& table, int degree, const std::string& kind,
                     double threshold);

// Least-squares fit of the per-degree means against the two-term basis of
// each energy kind (green: a N ln N + b N; log: a N^2 + b N ln^2 N; Riesz
// per regime). Requires >= 3 degrees.
std::vector<SweepFit> sweep_fits(const TrialTable& table);

// Serialization used by run_trials; exposed for the CLI and tests.
std::string trials_csv(const TrialTable& table);
std::string summary_json(const ExperimentConfig& config, const SummaryStats& summary);
SummaryStats summarize(const TrialTable& table);

} // namespace randzeros
