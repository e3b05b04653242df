// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "avg/averaging.hpp"
#include "engine/train.hpp"
#include "param_core/errors.hpp"

namespace lawa {

// ---- train ---------------------------------------------------------------

/// Validates config, writes <out>/config.resolved, then trains.
TrainResult run_training(const RunConfig& config, const TrainHooks& hooks = {});

// ---- average -------------------------------------------------------------

struct AverageOptions {
    std::filesystem::path dir;
    std::size_t k = kDefaultWindow;
    SchemeKind scheme = SchemeKind::Uniform;
    double alpha = kDefaultEmaAlpha;
    std::string prefix = "ckpt_";  // candidate files: <prefix>*.lawa
    std::filesystem::path out;
};

/// Picks the k candidate checkpoints with the largest header epochs, orders them
/// by epoch, averages them with the chosen scheme, and writes the result with
/// the newest input's epoch and step.
Checkpoint average_directory(const AverageOptions& options);

// ---- eval ----------------------------------------------------------------

struct EvalOptions {
    std::filesystem::path checkpoint;
    RunConfig config;               // model and dataset description
    std::string split = "val";      // train, val, or all
    BnMode bn_mode = BnMode::Off;
    std::optional<std::string> train_data;  // "config" or a CSV path; required for recompute
    std::size_t batch_size = 0;
};

EvalResult evaluate_checkpoint(const EvalOptions& options);

// ---- compare -------------------------------------------------------------

struct CompareOptions {
    std::vector<std::filesystem::path> runs;
    std::string metric = "val_loss";
    std::optional<std::string> averaged_metric;  // default avg_<metric>
    std::optional<bool> higher_is_better;        // default: true for *acc* columns
    std::vector<double> targets;
    std::size_t early_epochs = 0;  // epochs below this are reported as "early"
    std::filesystem::path out;
};

struct EpochSaving {
    std::uint64_t epoch = 0;
    std::string phase;  // undefined, early, main
    double baseline = 0.0;
    std::optional<double> averaged;
    std::optional<std::uint64_t> match_epoch;
    std::int64_t lag = 0;       // match_epoch - epoch (may be negative)
    std::uint64_t savings = 0;  // max(0, lag), or the remaining horizon when censored
    bool censored = false;      // baseline never matched within the run
};

struct TargetReach {
    double target = 0.0;
    std::optional<std::uint64_t> baseline_epoch;
    std::optional<std::uint64_t> averaged_epoch;
};

struct RunComparison {
    std::filesystem::path run;
    std::vector<EpochSaving> epochs;
    std::uint64_t max_savings = 0;
    std::optional<std::uint64_t> max_savings_epoch;
    std::vector<TargetReach> targets;
};

/// For every epoch e with an averaged value, finds the first epoch at which the
/// baseline column is at least as good (no interpolation). Writes <out> with
/// one row per (run, epoch) and <out stem>_summary.csv with one row per run;
/// with targets, also <out stem>_targets.csv.
std::vector<RunComparison> compare_runs(const CompareOptions& options);

/// Pure form of compare_runs for one run's metric columns.
RunComparison compare_columns(const std::vector<double>& baseline, const std::vector<std::optional<double>>& averaged,
                              bool higher_is_better, std::size_t early_epochs, const std::vector<double>& targets);

// ---- harnesses -----------------------------------------------------------

/// Trains the same configuration with uniform (LAWA) and ema averaging into
/// <out>/uniform and <out>/ema and writes both curves to <out>/schemes.csv.
std::filesystem::path compare_schemes(const RunConfig& base, const std::filesystem::path& out);

/// Trains one uniform-averaging run per k into <out>/k<k> and writes every
/// averaged curve next to the baseline in <out>/k_sweep.csv.
std::filesystem::path sweep_k(const RunConfig& base, const std::vector<std::size_t>& ks,
                              const std::filesystem::path& out);

// ---- shared --------------------------------------------------------------

/// Column-oriented view of a CSV file with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable read_csv_table(const std::filesystem::path& path);

/// Exit status for an error code: 1 for numerical/internal failures, 2 otherwise.
int exit_status_for(ErrorCode code) noexcept;

}  // namespace lawa
