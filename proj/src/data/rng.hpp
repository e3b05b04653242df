// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace lawa {

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t hash_tag(std::string_view tag) noexcept;

// Counter-based generator: draw n of stream (seed, purpose, stream) is a pure
// function of those four values, so independent consumers never perturb each
// other and results do not depend on the standard library's distributions.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::string_view purpose, std::uint64_t stream = 0) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal() noexcept;
    /// Uniform integer in [0, n); n must be nonzero.
    std::uint64_t below(std::uint64_t n) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lawa
