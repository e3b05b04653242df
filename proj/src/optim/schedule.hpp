// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace lawa {

enum class ScheduleKind { Constant, Cosine, PolyWarmup };

const char* schedule_kind_name(ScheduleKind kind) noexcept;
ScheduleKind parse_schedule_kind(std::string_view name);

struct ScheduleOptions {
    ScheduleKind kind = ScheduleKind::Constant;
    double base_lr = 0.1;  // peak rate for poly_warmup
    std::uint64_t total_steps = 1;
    std::uint64_t warmup_steps = 0;
    double end_lr = 0.0;
    double power = 1.0;
};

/// Learning rate as a function of the optimizer step index.
class LrSchedule {
public:
    explicit LrSchedule(ScheduleOptions options);

    /// Steps past total_steps clamp to the final rate.
    [[nodiscard]] double at(std::uint64_t t) const noexcept;
    [[nodiscard]] const ScheduleOptions& options() const noexcept { return options_; }

private:
    ScheduleOptions options_;
};

inline double lr_at(const LrSchedule& schedule, std::uint64_t t) noexcept { return schedule.at(t); }

}  // namespace lawa
