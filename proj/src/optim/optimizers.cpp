// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "optim/optimizers.hpp"

#include <cmath>
#include <string>

#include "param_core/errors.hpp"

namespace lawa {

namespace {

void check_inputs(const ParameterSet& params, const ParameterSet& grads, double lr) {
    require_same_structure(params, grads);
    if (!(lr >= 0.0) || !std::isfinite(lr)) {
        throw ConfigError("learning rate must be finite and nonnegative, got " + std::to_string(lr));
    }
    for (const auto& e : grads) {
        const auto g = e.tensor.values();
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (!std::isfinite(g[j])) {
                throw NonFiniteGradError("gradient of '" + e.name + "' element " + std::to_string(j) +
                                         " is not finite");
            }
        }
    }
}

ParameterSet zeros_like(const ParameterSet& p) { return scale(p, 0.0); }

void validate(const SgdOptions& o) {
    if (!(o.momentum >= 0.0 && o.momentum <= 1.0)) throw ConfigError("sgd momentum must lie in [0, 1]");
}

void validate(const AdamOptions& o) {
    if (!(o.beta1 >= 0.0 && o.beta1 < 1.0) || !(o.beta2 >= 0.0 && o.beta2 < 1.0)) {
        throw ConfigError("adam betas must lie in [0, 1)");
    }
    if (!(o.eps > 0.0)) throw ConfigError("adam eps must be positive");
}

void validate(const LookaheadOptions& o) {
    if (!(o.alpha >= 0.0 && o.alpha <= 1.0)) throw ConfigError("lookahead alpha must lie in [0, 1]");
    if (o.k < 1) throw ConfigError("lookahead k must be at least 1");
}

}  // namespace

ParameterSet sgd_step(SgdState& state, const ParameterSet& params, const ParameterSet& grads, double lr) {
    validate(state.options);
    check_inputs(params, grads, lr);
    if (!state.velocity) state.velocity = zeros_like(params);
    require_same_structure(params, *state.velocity);

    const double mu = state.options.momentum;
    std::vector<std::vector<double>> v_next(params.size());
    std::vector<std::vector<double>> theta_next(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto theta = params[i].tensor.values();
        const auto g = grads[i].tensor.values();
        const auto v = (*state.velocity)[i].tensor.values();
        v_next[i].resize(theta.size());
        theta_next[i].resize(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j) {
            v_next[i][j] = mu * v[j] + g[j];
            theta_next[i][j] = theta[j] - lr * v_next[i][j];
        }
    }
    state.velocity = state.velocity->with_values(std::move(v_next));
    ++state.step;
    return params.with_values(std::move(theta_next));
}

ParameterSet adam_step(AdamState& state, const ParameterSet& params, const ParameterSet& grads, double lr) {
    validate(state.options);
    check_inputs(params, grads, lr);
    if (!state.m) state.m = zeros_like(params);
    if (!state.v) state.v = zeros_like(params);
    require_same_structure(params, *state.m);

    const auto& o = state.options;
    const double t = static_cast<double>(state.step + 1);
    const double bias1 = 1.0 - std::pow(o.beta1, t);
    const double bias2 = 1.0 - std::pow(o.beta2, t);

    std::vector<std::vector<double>> m_next(params.size());
    std::vector<std::vector<double>> v_next(params.size());
    std::vector<std::vector<double>> theta_next(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto theta = params[i].tensor.values();
        const auto g = grads[i].tensor.values();
        const auto m = (*state.m)[i].tensor.values();
        const auto v = (*state.v)[i].tensor.values();
        m_next[i].resize(theta.size());
        v_next[i].resize(theta.size());
        theta_next[i].resize(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j) {
            m_next[i][j] = o.beta1 * m[j] + (1.0 - o.beta1) * g[j];
            v_next[i][j] = o.beta2 * v[j] + (1.0 - o.beta2) * g[j] * g[j];
            const double m_hat = m_next[i][j] / bias1;
            const double v_hat = v_next[i][j] / bias2;
            theta_next[i][j] = theta[j] - lr * m_hat / (std::sqrt(v_hat) + o.eps);
        }
    }
    state.m = state.m->with_values(std::move(m_next));
    state.v = state.v->with_values(std::move(v_next));
    ++state.step;
    return params.with_values(std::move(theta_next));
}

ParameterSet lookahead_step(LookaheadState& state, const ParameterSet& params, const ParameterSet& grads,
                            double lr) {
    validate(state.options);
    if (!state.slow) state.slow = params;
    require_same_structure(params, *state.slow);

    auto fast = std::visit(
        [&](auto& inner) -> ParameterSet {
            if constexpr (std::is_same_v<std::decay_t<decltype(inner)>, SgdState>) {
                return sgd_step(inner, params, grads, lr);
            } else {
                return adam_step(inner, params, grads, lr);
            }
        },
        state.inner);
    ++state.step;
    if (++state.inner_count < state.options.k) return fast;

    // Pull the slow weights toward the fast ones, then restart the fast weights there.
    state.inner_count = 0;
    state.slow = add_scaled(*state.slow, add_scaled(fast, *state.slow, -1.0), state.options.alpha);
    return *state.slow;
}

const char* optimizer_kind_name(OptimizerKind kind) noexcept {
    return kind == OptimizerKind::Sgd ? "sgd" : "adam";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
    if (name == "sgd") return OptimizerKind::Sgd;
    if (name == "adam") return OptimizerKind::Adam;
    throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

Optimizer Optimizer::sgd(SgdOptions options) {
    validate(options);
    return Optimizer(SgdState{options, std::nullopt, 0});
}

Optimizer Optimizer::adam(AdamOptions options) {
    validate(options);
    return Optimizer(AdamState{options, std::nullopt, std::nullopt, 0});
}

Optimizer Optimizer::lookahead(Optimizer inner, LookaheadOptions options) {
    validate(options);
    LookaheadState state;
    state.options = options;
    if (auto* s = std::get_if<SgdState>(&inner.state_)) {
        state.inner = std::move(*s);
    } else if (auto* a = std::get_if<AdamState>(&inner.state_)) {
        state.inner = std::move(*a);
    } else {
        throw ConfigError("lookahead cannot wrap another lookahead optimizer");
    }
    return Optimizer(std::move(state));
}

ParameterSet Optimizer::step(const ParameterSet& params, const ParameterSet& grads, double lr) {
    return std::visit(
        [&](auto& s) -> ParameterSet {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SgdState>) {
                return sgd_step(s, params, grads, lr);
            } else if constexpr (std::is_same_v<T, AdamState>) {
                return adam_step(s, params, grads, lr);
            } else {
                return lookahead_step(s, params, grads, lr);
            }
        },
        state_);
}

std::uint64_t Optimizer::step_count() const noexcept {
    return std::visit([](const auto& s) { return s.step; }, state_);
}

}  // namespace lawa
