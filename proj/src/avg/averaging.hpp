// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avg/checkpoint_ring.hpp"
#include "param_core/parameter_set.hpp"

namespace lawa {

inline constexpr std::size_t kDefaultWindow = 6;
inline constexpr std::size_t kLargeWindowWarning = 16;
inline constexpr double kDefaultEmaAlpha = 0.9;

/// Elementwise arithmetic mean, accumulated in f64 and rounded back to the
/// checkpoints' element type. Inputs must be structurally matched and finite.
ParameterSet uniform_average(std::span<const Checkpoint> ckpts);
ParameterSet uniform_average(std::span<const Checkpoint* const> ckpts);

/// The in-training LAWA hook: nothing until epoch + 1 >= k, then the mean of
/// the ring's k checkpoints (which already include `epoch`).
std::optional<ParameterSet> lawa_step(const CheckpointRing& ring, std::uint64_t epoch, std::size_t k);

enum class SchemeKind { None, Uniform, Ema, Polyak };

const char* scheme_kind_name(SchemeKind kind) noexcept;
SchemeKind parse_scheme_kind(std::string_view name);

struct SchemeConfig {
    SchemeKind kind = SchemeKind::Uniform;
    std::size_t k = kDefaultWindow;
    double alpha = kDefaultEmaAlpha;
};

/// Throws ConfigError for invalid settings; returns non-fatal warnings.
std::vector<std::string> validate_scheme(const SchemeConfig& config);

class AveragingScheme {
public:
    explicit AveragingScheme(SchemeConfig config);

    [[nodiscard]] const SchemeConfig& config() const noexcept { return config_; }
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Feeds one saved checkpoint (epochs 0, 1, 2, ... in order) and returns the
    /// scheme's averaged model when one is defined.
    std::optional<ParameterSet> absorb(Checkpoint c);

    /// Number of checkpoints absorbed so far.
    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] const CheckpointRing* ring() const noexcept;

private:
    friend ParameterSet ema_update(AveragingScheme& scheme, const Checkpoint& c);
    friend ParameterSet polyak_update(AveragingScheme& scheme, const Checkpoint& c);

    SchemeConfig config_;
    std::vector<std::string> warnings_;
    std::optional<CheckpointRing> ring_;
    std::optional<ParameterSet> state_;  // f64 accumulator for ema / polyak
    std::size_t count_ = 0;
};

/// theta_0 on the first call, then alpha * theta_E + (1 - alpha) * previous.
ParameterSet ema_update(AveragingScheme& scheme, const Checkpoint& c);
/// Running mean of every absorbed checkpoint: mean += (theta_t - mean) / t.
ParameterSet polyak_update(AveragingScheme& scheme, const Checkpoint& c);

}  // namespace lawa
