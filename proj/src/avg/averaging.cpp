// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "avg/averaging.hpp"

#include <algorithm>
#include <cmath>

#include "param_core/errors.hpp"

namespace lawa {

ParameterSet uniform_average(std::span<const Checkpoint* const> ckpts) {
    if (ckpts.empty()) throw InternalStateError("cannot average an empty checkpoint list");
    const ParameterSet& first = ckpts.front()->params;
    for (const auto* c : ckpts) {
        require_same_structure(first, c->params);
        require_finite(c->params, "checkpoint at epoch " + std::to_string(c->epoch));
    }
    const double n = static_cast<double>(ckpts.size());
    std::vector<std::vector<double>> out(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        out[i].assign(first[i].tensor.size(), 0.0);
        for (const auto* c : ckpts) {
            const auto v = c->params[i].tensor.values();
            for (std::size_t j = 0; j < v.size(); ++j) out[i][j] += v[j];
        }
        for (auto& x : out[i]) x /= n;
    }
    return first.with_values(std::move(out));
}

ParameterSet uniform_average(std::span<const Checkpoint> ckpts) {
    std::vector<const Checkpoint*> ptrs;
    ptrs.reserve(ckpts.size());
    for (const auto& c : ckpts) ptrs.push_back(&c);
    return uniform_average(std::span<const Checkpoint* const>(ptrs));
}

std::optional<ParameterSet> lawa_step(const CheckpointRing& ring, std::uint64_t epoch, std::size_t k) {
    if (k == 0) throw ConfigError("LAWA window k must be at least 1");
    if (ring.capacity() != k) {
        throw InternalStateError("ring capacity " + std::to_string(ring.capacity()) +
                                 " does not match window k=" + std::to_string(k));
    }
    const auto expected = static_cast<std::size_t>(std::min<std::uint64_t>(epoch + 1, k));
    if (ring.size() != expected || ring.newest().epoch != epoch) {
        throw InternalStateError("ring holds " + std::to_string(ring.size()) + " checkpoints ending at epoch " +
                                 (ring.empty() ? std::string("none") : std::to_string(ring.newest().epoch)) +
                                 ", inconsistent with epoch " + std::to_string(epoch));
    }
    if (epoch + 1 < k) return std::nullopt;
    const auto contents = ring.contents();
    return uniform_average(std::span<const Checkpoint* const>(contents));
}

const char* scheme_kind_name(SchemeKind kind) noexcept {
    switch (kind) {
        case SchemeKind::None: return "none";
        case SchemeKind::Uniform: return "uniform";
        case SchemeKind::Ema: return "ema";
        case SchemeKind::Polyak: return "polyak";
    }
    return "none";
}

SchemeKind parse_scheme_kind(std::string_view name) {
    if (name == "none") return SchemeKind::None;
    if (name == "uniform" || name == "lawa") return SchemeKind::Uniform;
    if (name == "ema") return SchemeKind::Ema;
    if (name == "polyak") return SchemeKind::Polyak;
    throw ConfigError("unknown averaging scheme '" + std::string(name) + "'");
}

std::vector<std::string> validate_scheme(const SchemeConfig& config) {
    std::vector<std::string> warnings;
    if (config.kind == SchemeKind::Uniform) {
        if (config.k < 1) throw ConfigError("uniform averaging needs k >= 1");
        if (config.k > kLargeWindowWarning) {
            warnings.push_back("k=" + std::to_string(config.k) +
                               " exceeds 16; averaging that many checkpoints (k>16) tends to perform worse");
        }
    }
    if (config.kind == SchemeKind::Ema && !(config.alpha >= 0.0 && config.alpha <= 1.0)) {
        throw ConfigError("ema alpha must lie in [0, 1], got " + std::to_string(config.alpha));
    }
    return warnings;
}

AveragingScheme::AveragingScheme(SchemeConfig config) : config_(config), warnings_(validate_scheme(config)) {
    if (config_.kind == SchemeKind::Uniform) ring_.emplace(config_.k);
}

const CheckpointRing* AveragingScheme::ring() const noexcept { return ring_ ? &*ring_ : nullptr; }

std::optional<ParameterSet> AveragingScheme::absorb(Checkpoint c) {
    switch (config_.kind) {
        case SchemeKind::None:
            ++count_;
            return std::nullopt;
        case SchemeKind::Uniform: {
            const auto epoch = c.epoch;
            ring_->push(std::move(c));
            ++count_;
            return lawa_step(*ring_, epoch, config_.k);
        }
        case SchemeKind::Ema: return ema_update(*this, c);
        case SchemeKind::Polyak: return polyak_update(*this, c);
    }
    return std::nullopt;
}

ParameterSet ema_update(AveragingScheme& scheme, const Checkpoint& c) {
    if (scheme.config_.kind != SchemeKind::Ema) throw ConfigError("ema_update on a non-ema scheme");
    require_finite(c.params, "checkpoint at epoch " + std::to_string(c.epoch));
    const auto theta = c.params.cast(DType::F64);
    if (!scheme.state_) {
        scheme.state_ = theta;
    } else {
        const double alpha = scheme.config_.alpha;
        const auto& prev = *scheme.state_;
        require_same_structure(prev, theta);
        std::vector<std::vector<double>> next(prev.size());
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const auto p = prev[i].tensor.values();
            const auto x = theta[i].tensor.values();
            next[i].resize(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) next[i][j] = alpha * x[j] + (1.0 - alpha) * p[j];
        }
        scheme.state_ = prev.with_values(std::move(next));
    }
    ++scheme.count_;
    return scheme.state_->cast(c.params.dtype());
}

ParameterSet polyak_update(AveragingScheme& scheme, const Checkpoint& c) {
    if (scheme.config_.kind != SchemeKind::Polyak) throw ConfigError("polyak_update on a non-polyak scheme");
    require_finite(c.params, "checkpoint at epoch " + std::to_string(c.epoch));
    const auto theta = c.params.cast(DType::F64);
    if (!scheme.state_) {
        scheme.state_ = theta;
    } else {
        const auto& mean = *scheme.state_;
        require_same_structure(mean, theta);
        const double t = static_cast<double>(scheme.count_ + 1);
        std::vector<std::vector<double>> next(mean.size());
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const auto m = mean[i].tensor.values();
            const auto x = theta[i].tensor.values();
            next[i].resize(m.size());
            for (std::size_t j = 0; j < m.size(); ++j) next[i][j] = m[j] + (x[j] - m[j]) / t;
        }
        scheme.state_ = mean.with_values(std::move(next));
    }
    ++scheme.count_;
    return scheme.state_->cast(c.params.dtype());
}

}  // namespace lawa
