// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "optim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "param_core/errors.hpp"

namespace lawa {

const char* schedule_kind_name(ScheduleKind kind) noexcept {
    switch (kind) {
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::Cosine: return "cosine";
        case ScheduleKind::PolyWarmup: return "poly_warmup";
    }
    return "constant";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
    if (name == "constant") return ScheduleKind::Constant;
    if (name == "cosine") return ScheduleKind::Cosine;
    if (name == "poly_warmup" || name == "poly") return ScheduleKind::PolyWarmup;
    throw ConfigError("unknown learning-rate schedule '" + std::string(name) + "'");
}

LrSchedule::LrSchedule(ScheduleOptions options) : options_(options) {
    if (!(options_.base_lr >= 0.0) || !std::isfinite(options_.base_lr)) {
        throw ConfigError("base learning rate must be finite and nonnegative");
    }
    if (options_.total_steps == 0) throw ConfigError("schedule needs at least one step");
    if (options_.warmup_steps > options_.total_steps) {
        throw ConfigError("warmup steps (" + std::to_string(options_.warmup_steps) + ") exceed total steps (" +
                          std::to_string(options_.total_steps) + ")");
    }
    if (!(options_.end_lr >= 0.0) || !(options_.power > 0.0)) {
        throw ConfigError("poly_warmup needs end_lr >= 0 and power > 0");
    }
}

double LrSchedule::at(std::uint64_t t) const noexcept {
    const auto& o = options_;
    t = std::min(t, o.total_steps);
    switch (o.kind) {
        case ScheduleKind::Constant: return o.base_lr;
        case ScheduleKind::Cosine: {
            const double frac = static_cast<double>(t) / static_cast<double>(o.total_steps);
            return std::max(0.0, o.base_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * frac)));
        }
        case ScheduleKind::PolyWarmup: {
            if (t < o.warmup_steps) {
                return o.base_lr * static_cast<double>(t) / static_cast<double>(o.warmup_steps);
            }
            if (o.total_steps == o.warmup_steps) return o.base_lr;
            const double frac = static_cast<double>(t - o.warmup_steps) /
                                static_cast<double>(o.total_steps - o.warmup_steps);
            return o.end_lr + (o.base_lr - o.end_lr) * std::pow(1.0 - frac, o.power);
        }
    }
    return o.base_lr;
}

}  // namespace lawa
