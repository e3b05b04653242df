// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "param_core/parameter_set.hpp"

namespace lawa {

inline constexpr double kDefaultMomentum = 0.9;
inline constexpr double kDefaultLookaheadAlpha = 0.8;
inline constexpr std::size_t kDefaultLookaheadSteps = 5;

struct SgdOptions {
    double momentum = kDefaultMomentum;
};

struct AdamOptions {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct LookaheadOptions {
    double alpha = kDefaultLookaheadAlpha;
    std::size_t k = kDefaultLookaheadSteps;
};

// Heavy-ball momentum: v <- mu * v + g, theta <- theta - lr * v.
struct SgdState {
    SgdOptions options;
    std::optional<ParameterSet> velocity;
    std::uint64_t step = 0;
};

struct AdamState {
    AdamOptions options;
    std::optional<ParameterSet> m;
    std::optional<ParameterSet> v;
    std::uint64_t step = 0;
};

using InnerOptimizerState = std::variant<SgdState, AdamState>;

struct LookaheadState {
    LookaheadOptions options;
    InnerOptimizerState inner;
    std::optional<ParameterSet> slow;
    std::size_t inner_count = 0;  // cycles in [0, k)
    std::uint64_t step = 0;
};

ParameterSet sgd_step(SgdState& state, const ParameterSet& params, const ParameterSet& grads, double lr);
ParameterSet adam_step(AdamState& state, const ParameterSet& params, const ParameterSet& grads, double lr);
ParameterSet lookahead_step(LookaheadState& state, const ParameterSet& params, const ParameterSet& grads,
                            double lr);

enum class OptimizerKind { Sgd, Adam };

const char* optimizer_kind_name(OptimizerKind kind) noexcept;
OptimizerKind parse_optimizer_kind(std::string_view name);

/// One of the optimizers above, chosen at run time.
class Optimizer {
public:
    static Optimizer sgd(SgdOptions options = {});
    static Optimizer adam(AdamOptions options = {});
    static Optimizer lookahead(Optimizer inner, LookaheadOptions options = {});

    ParameterSet step(const ParameterSet& params, const ParameterSet& grads, double lr);
    [[nodiscard]] std::uint64_t step_count() const noexcept;

private:
    using State = std::variant<SgdState, AdamState, LookaheadState>;
    explicit Optimizer(State state) : state_(std::move(state)) {}
    State state_;
};

}  // namespace lawa
