// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "data/rng.hpp"

#include <cmath>
#include <numbers>

namespace lawa {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view purpose, std::uint64_t stream) noexcept
    : key_(splitmix64(splitmix64(seed) ^ hash_tag(purpose)) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t CounterRng::next_u64() noexcept { return splitmix64(key_ + 0xD1B54A32D192ED03ULL * ++counter_); }

double CounterRng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
    const std::uint64_t limit = -n % n;  // 2^64 mod n; reject the short tail
    for (;;) {
        const auto x = next_u64();
        if (x >= limit) return x % n;
    }
}

}  // namespace lawa
