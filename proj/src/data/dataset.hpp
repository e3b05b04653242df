// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lawa {

enum class TaskKind { Classification, Regression };

/// A row-major block of samples handed to the network.
struct Batch {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> features;      // rows x cols
    std::vector<std::int32_t> labels;  // classification targets
    std::vector<double> targets;       // regression targets, rows x target width

    [[nodiscard]] const double* row(std::size_t r) const noexcept { return features.data() + r * cols; }
};

struct Dataset {
    std::size_t rows = 0;
    std::size_t dims = 0;
    std::vector<double> features;  // rows x dims, standardized on the train split
    TaskKind task = TaskKind::Classification;
    std::size_t classes = 0;  // 0 for regression
    std::vector<std::int32_t> labels;
    std::vector<double> targets;  // regression: one value per row
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;

    [[nodiscard]] Batch gather(std::span<const std::size_t> indices) const;
    [[nodiscard]] Batch train_batch() const { return gather(train); }
    [[nodiscard]] Batch val_batch() const { return gather(val); }
};

/// Interleaved 2-D spirals, one arm per class, with Gaussian angular noise.
/// Split 80/20 stratified by class.
Dataset make_spirals(std::uint64_t seed, std::size_t n_per_class, std::size_t classes, double noise);

/// Numeric CSV with a header row. Integer-valued, nonnegative labels make a
/// classification task; anything else is regression. Split 80/20 by a fixed
/// hash of the row index.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);

/// Per-dimension zero mean / unit variance using statistics of the train rows.
void standardize(Dataset& data);

}  // namespace lawa
