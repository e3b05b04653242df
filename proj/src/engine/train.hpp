// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avg/averaging.hpp"
#include "data/dataset.hpp"
#include "engine/mlp.hpp"
#include "optim/optimizers.hpp"
#include "optim/schedule.hpp"

namespace lawa {

enum class BnMode { Recompute, Copy, Off };

const char* bn_mode_name(BnMode mode) noexcept;
BnMode parse_bn_mode(std::string_view name);

struct DataConfig {
    std::string source = "spirals";  // "spirals" or a CSV path
    std::size_t n_per_class = 1000;
    std::size_t classes = 2;
    double noise = 0.2;
    std::string label_column = "label";
    std::optional<std::uint64_t> seed;  // defaults to the run seed
};

/// Every knob of a training run. Defaults follow the reference recipes:
/// k = 6, ema alpha = 0.9, momentum 0.9, lookahead alpha 0.8 every 5 steps.
struct RunConfig {
    DataConfig data;
    std::vector<std::size_t> hidden{64, 64};
    bool batch_norm = false;

    OptimizerKind optimizer = OptimizerKind::Sgd;
    double lr = 0.1;
    double momentum = kDefaultMomentum;
    AdamOptions adam;
    bool lookahead = false;
    LookaheadOptions lookahead_options;

    ScheduleKind schedule = ScheduleKind::Cosine;
    std::uint64_t warmup_steps = 0;
    double end_lr = 0.0;
    double power = 1.0;

    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    std::uint64_t seed = 1;

    SchemeConfig scheme;
    std::optional<BnMode> bn_mode;  // unset: recompute with BN layers, off without
    std::uint64_t save_every_steps = 0;  // 0 saves once per epoch
    bool save_averaged = false;
    bool record_wall_time = true;
    std::filesystem::path out = "run";

    [[nodiscard]] BnMode effective_bn_mode() const noexcept;
};

struct MetricsRecord {
    std::uint64_t epoch = 0;
    std::uint64_t step = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    std::optional<double> train_acc;
    double val_loss = 0.0;
    std::optional<double> val_acc;
    std::optional<double> avg_val_loss;
    std::optional<double> avg_val_acc;
    double wall_seconds = 0.0;
};

inline constexpr std::string_view kMetricsHeader =
    "epoch,step,lr,train_loss,train_acc,val_loss,val_acc,avg_val_loss,avg_val_acc,wall_seconds";

/// One CSV line (no newline): 9 significant digits, empty cells for undefined values.
std::string format_metrics_row(const MetricsRecord& r);
std::string format_number(double v);

Dataset load_dataset(const RunConfig& config);
ModelSpec model_spec_for(const RunConfig& config, const Dataset& data);

struct TrainHooks {
    /// Called at every save event with the saved checkpoint and the averaged
    /// model (after BN handling) if one is defined.
    std::function<void(const Checkpoint&, const std::optional<ParameterSet>&)> on_save;
};

struct TrainResult {
    std::vector<MetricsRecord> metrics;
    std::vector<std::string> warnings;
    ParameterSet final_params;
    std::optional<ParameterSet> final_average;
    ModelSpec spec;
};

/// Checkpoint and averaged-model file names inside a run directory.
std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t slot);
std::filesystem::path averaged_path(const std::filesystem::path& dir, std::uint64_t slot);

/// Trains, saving checkpoints to config.out and streaming metrics.csv there.
/// Any non-finite value aborts the run with the failing epoch in the message.
TrainResult train_run(const RunConfig& config, const TrainHooks& hooks = {});

}  // namespace lawa
