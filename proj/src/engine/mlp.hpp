// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "data/dataset.hpp"
#include "param_core/parameter_set.hpp"

namespace lawa {

inline constexpr double kBnEpsilon = 1e-5;
inline constexpr double kBnMomentum = 0.1;

enum class LossKind { CrossEntropy, MeanSquaredError };

/// Fully connected ReLU network. Layer l maps widths[l] -> widths[l + 1]; every
/// layer except the last is hidden and may carry batch normalization before its
/// activation.
struct ModelSpec {
    std::vector<std::size_t> widths;
    std::vector<bool> use_bn;  // one flag per hidden layer; empty means no BN
    LossKind loss = LossKind::CrossEntropy;
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] std::size_t hidden_layers() const noexcept { return widths.size() - 2; }
    [[nodiscard]] bool bn_at(std::size_t layer) const noexcept { return layer < use_bn.size() && use_bn[layer]; }
    [[nodiscard]] bool has_bn() const noexcept;
};

/// BN running mean / variance entries are named "bn<l>.running_mean" and
/// "bn<l>.running_var"; they are carried in the parameter set but not trained.
bool is_bn_statistic(std::string_view name) noexcept;

ParameterSet init_params(const ModelSpec& spec);

struct LayerCache {
    std::vector<double> input;   // rows x fan_in
    std::vector<double> normed;  // BN layers: normalized pre-activations
    std::vector<double> inv_std;
    std::vector<double> batch_mean;
    std::vector<double> batch_var;
    std::vector<double> pre_relu;  // value fed to ReLU (hidden) or the logits (output)
};

struct ForwardCache {
    bool training = false;
    std::size_t rows = 0;
    std::vector<LayerCache> layers;
};

struct ForwardResult {
    std::vector<double> outputs;  // rows x widths.back()
    ForwardCache cache;
};

struct LossAndGrads {
    double loss = 0.0;
    ParameterSet grads;
};

/// In training mode BN normalizes with batch statistics; in inference mode it
/// uses the stored running statistics.
ForwardResult forward(const ParameterSet& params, const ModelSpec& spec, const Batch& batch, bool training);

/// Batch-mean loss and its exact gradient. BN statistic entries get zero gradient.
LossAndGrads backward(const ParameterSet& params, const ModelSpec& spec, const Batch& batch,
                      const ForwardCache& cache);

/// Running statistics after one training-mode step: r <- (1 - m) r + m * batch.
ParameterSet update_running_stats(const ParameterSet& params, const ModelSpec& spec, const ForwardCache& cache,
                                  double momentum = kBnMomentum);

/// Batch-mean loss of given network outputs.
double batch_loss(const ModelSpec& spec, const Batch& batch, const std::vector<double>& outputs);

/// Replaces every BN layer's running statistics with the exact population mean
/// and variance of its inputs over `data`, processing layers front to back.
/// Returns params unchanged when the model has no BN layers.
ParameterSet recompute_bn_stats(const ParameterSet& params, const ModelSpec& spec, const Batch& data);

/// Copies BN statistic entries from `source` into `target`.
ParameterSet copy_bn_stats(const ParameterSet& target, const ParameterSet& source);

struct EvalResult {
    double loss = 0.0;
    std::optional<double> accuracy;  // classification only
};

/// Inference-mode evaluation. batch_size 0 evaluates everything at once.
EvalResult evaluate(const ParameterSet& params, const ModelSpec& spec, const Batch& data,
                    std::size_t batch_size = 0);

}  // namespace lawa
