// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "engine/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "data/rng.hpp"
#include "param_core/errors.hpp"

namespace lawa {

namespace {

struct LayerSlots {
    std::size_t fan_in = 0;
    std::size_t fan_out = 0;
    std::size_t weight = 0;
    std::size_t bias = 0;
    bool bn = false;
    std::size_t gamma = 0;
    std::size_t beta = 0;
    std::size_t mean = 0;
    std::size_t var = 0;
};

std::string fc(std::size_t l, const char* what) { return "fc" + std::to_string(l) + "." + what; }
std::string bn(std::size_t l, const char* what) { return "bn" + std::to_string(l) + "." + what; }

// Expected entry order: fc<l>.weight, fc<l>.bias, then bn<l>.{gamma,beta,running_mean,running_var}.
std::vector<std::pair<std::string, Shape>> expected_layout(const ModelSpec& spec) {
    std::vector<std::pair<std::string, Shape>> out;
    const auto layers = spec.widths.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
        const auto in = spec.widths[l];
        const auto width = spec.widths[l + 1];
        out.emplace_back(fc(l, "weight"), Shape{width, in});
        out.emplace_back(fc(l, "bias"), Shape{width});
        if (l + 1 < layers && spec.bn_at(l)) {
            out.emplace_back(bn(l, "gamma"), Shape{width});
            out.emplace_back(bn(l, "beta"), Shape{width});
            out.emplace_back(bn(l, "running_mean"), Shape{width});
            out.emplace_back(bn(l, "running_var"), Shape{width});
        }
    }
    return out;
}

std::vector<LayerSlots> resolve(const ParameterSet& params, const ModelSpec& spec) {
    spec.validate();
    const auto layout = expected_layout(spec);
    if (layout.size() != params.size()) {
        throw ShapeError("model spec expects " + std::to_string(layout.size()) + " parameter entries, got " +
                         std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (params[i].name != layout[i].first || params[i].tensor.shape() != layout[i].second) {
            throw ShapeError("parameter entry " + std::to_string(i) + " ('" + params[i].name +
                             "') does not match the model spec (expected '" + layout[i].first + "')");
        }
    }
    std::vector<LayerSlots> slots;
    std::size_t idx = 0;
    const auto layers = spec.widths.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
        LayerSlots s;
        s.fan_in = spec.widths[l];
        s.fan_out = spec.widths[l + 1];
        s.weight = idx++;
        s.bias = idx++;
        if (l + 1 < layers && spec.bn_at(l)) {
            s.bn = true;
            s.gamma = idx++;
            s.beta = idx++;
            s.mean = idx++;
            s.var = idx++;
        }
        slots.push_back(s);
    }
    return slots;
}

void check_batch(const ModelSpec& spec, const Batch& batch) {
    if (batch.cols != spec.widths.front() || batch.features.size() != batch.rows * batch.cols) {
        throw ShapeError("batch has " + std::to_string(batch.cols) + " features, model expects " +
                         std::to_string(spec.widths.front()));
    }
}

void check_targets(const ModelSpec& spec, const Batch& batch) {
    const auto out = spec.widths.back();
    if (spec.loss == LossKind::CrossEntropy) {
        if (batch.labels.size() != batch.rows) throw ShapeError("batch needs one class label per row");
        for (auto y : batch.labels) {
            if (y < 0 || static_cast<std::size_t>(y) >= out) {
                throw ShapeError("label " + std::to_string(y) + " outside [0, " + std::to_string(out) + ")");
            }
        }
    } else if (batch.targets.size() != batch.rows * out) {
        throw ShapeError("batch needs " + std::to_string(out) + " regression targets per row");
    }
}

// z = x W^T + b, x is rows x in, W is out x in.
std::vector<double> affine(const std::vector<double>& x, std::size_t rows, std::span<const double> w,
                           std::span<const double> b, std::size_t in, std::size_t out) {
    std::vector<double> z(rows * out);
    for (std::size_t n = 0; n < rows; ++n) {
        const double* xr = x.data() + n * in;
        for (std::size_t o = 0; o < out; ++o) {
            const double* wr = w.data() + o * in;
            double acc = b[o];
            for (std::size_t i = 0; i < in; ++i) acc += xr[i] * wr[i];
            z[n * out + o] = acc;
        }
    }
    return z;
}

// Two-pass per-column population mean and variance.
void column_stats(const std::vector<double>& z, std::size_t rows, std::size_t cols, std::vector<double>& mean,
                  std::vector<double>& var) {
    mean.assign(cols, 0.0);
    var.assign(cols, 0.0);
    for (std::size_t n = 0; n < rows; ++n) {
        for (std::size_t c = 0; c < cols; ++c) mean[c] += z[n * cols + c];
    }
    for (auto& m : mean) m /= static_cast<double>(rows);
    for (std::size_t n = 0; n < rows; ++n) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double d = z[n * cols + c] - mean[c];
            var[c] += d * d;
        }
    }
    for (auto& v : var) v /= static_cast<double>(rows);
}

void check_finite(const std::vector<double>& v, std::size_t layer) {
    for (double x : v) {
        if (!std::isfinite(x)) throw NonFiniteError("layer " + std::to_string(layer) + " produced non-finite values");
    }
}

std::vector<double> per_sample_losses(const ModelSpec& spec, const Batch& batch, const std::vector<double>& outputs) {
    check_targets(spec, batch);
    const auto out = spec.widths.back();
    std::vector<double> losses(batch.rows);
    for (std::size_t n = 0; n < batch.rows; ++n) {
        const double* o = outputs.data() + n * out;
        if (spec.loss == LossKind::CrossEntropy) {
            const double mx = *std::max_element(o, o + out);
            double sum = 0.0;
            for (std::size_t j = 0; j < out; ++j) sum += std::exp(o[j] - mx);
            losses[n] = mx + std::log(sum) - o[batch.labels[n]];
        } else {
            double sq = 0.0;
            for (std::size_t j = 0; j < out; ++j) {
                const double d = o[j] - batch.targets[n * out + j];
                sq += d * d;
            }
            losses[n] = sq;
        }
    }
    return losses;
}

Batch slice_rows(const Batch& b, std::size_t begin, std::size_t end, std::size_t target_width) {
    Batch s;
    s.rows = end - begin;
    s.cols = b.cols;
    s.features.assign(b.features.begin() + static_cast<std::ptrdiff_t>(begin * b.cols),
                      b.features.begin() + static_cast<std::ptrdiff_t>(end * b.cols));
    if (!b.labels.empty()) {
        s.labels.assign(b.labels.begin() + static_cast<std::ptrdiff_t>(begin),
                        b.labels.begin() + static_cast<std::ptrdiff_t>(end));
    }
    if (!b.targets.empty()) {
        s.targets.assign(b.targets.begin() + static_cast<std::ptrdiff_t>(begin * target_width),
                         b.targets.begin() + static_cast<std::ptrdiff_t>(end * target_width));
    }
    return s;
}

}  // namespace

void ModelSpec::validate() const {
    if (widths.size() < 3) throw ConfigError("model needs an input width, at least one hidden layer, and an output width");
    for (auto w : widths) {
        if (w == 0) throw ConfigError("layer widths must be positive");
    }
    if (use_bn.size() > hidden_layers()) throw ConfigError("more batch-norm flags than hidden layers");
}

bool ModelSpec::has_bn() const noexcept {
    const auto hidden = widths.size() > 2 ? hidden_layers() : 0;
    for (std::size_t l = 0; l < hidden; ++l) {
        if (bn_at(l)) return true;
    }
    return false;
}

bool is_bn_statistic(std::string_view name) noexcept {
    return name.starts_with("bn") && (name.ends_with(".running_mean") || name.ends_with(".running_var"));
}

ParameterSet init_params(const ModelSpec& spec) {
    spec.validate();
    CounterRng rng(spec.seed, "init");
    std::vector<Entry> entries;
    for (auto& [name, shape] : expected_layout(spec)) {
        const auto n = element_count(shape);
        std::vector<double> values(n, 0.0);
        if (name.ends_with(".weight")) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(shape[1]));
            for (auto& v : values) v = rng.uniform(-bound, bound);
        } else if (name.ends_with(".gamma") || name.ends_with(".running_var")) {
            std::fill(values.begin(), values.end(), 1.0);
        }
        entries.push_back({name, Tensor(DType::F64, shape, std::move(values))});
    }
    return ParameterSet(std::move(entries));
}

ForwardResult forward(const ParameterSet& params, const ModelSpec& spec, const Batch& batch, bool training) {
    const auto slots = resolve(params, spec);
    check_batch(spec, batch);

    ForwardResult result;
    result.cache.training = training;
    result.cache.rows = batch.rows;
    std::vector<double> h = batch.features;
    for (std::size_t l = 0; l < slots.size(); ++l) {
        const auto& s = slots[l];
        LayerCache lc;
        auto z = affine(h, batch.rows, params[s.weight].tensor.values(), params[s.bias].tensor.values(), s.fan_in,
                        s.fan_out);
        lc.input = std::move(h);
        if (s.bn) {
            if (training) {
                column_stats(z, batch.rows, s.fan_out, lc.batch_mean, lc.batch_var);
            } else {
                const auto m = params[s.mean].tensor.values();
                const auto v = params[s.var].tensor.values();
                lc.batch_mean.assign(m.begin(), m.end());
                lc.batch_var.assign(v.begin(), v.end());
            }
            const auto gamma = params[s.gamma].tensor.values();
            const auto beta = params[s.beta].tensor.values();
            lc.inv_std.resize(s.fan_out);
            for (std::size_t c = 0; c < s.fan_out; ++c) lc.inv_std[c] = 1.0 / std::sqrt(lc.batch_var[c] + kBnEpsilon);
            lc.normed.resize(z.size());
            for (std::size_t n = 0; n < batch.rows; ++n) {
                for (std::size_t c = 0; c < s.fan_out; ++c) {
                    const auto k = n * s.fan_out + c;
                    lc.normed[k] = (z[k] - lc.batch_mean[c]) * lc.inv_std[c];
                    z[k] = gamma[c] * lc.normed[k] + beta[c];
                }
            }
        }
        check_finite(z, l);
        const bool hidden = l + 1 < slots.size();
        if (hidden) {
            h.resize(z.size());
            for (std::size_t k = 0; k < z.size(); ++k) h[k] = z[k] > 0.0 ? z[k] : 0.0;
        } else {
            result.outputs = z;
        }
        lc.pre_relu = std::move(z);
        result.cache.layers.push_back(std::move(lc));
    }
    return result;
}

double batch_loss(const ModelSpec& spec, const Batch& batch, const std::vector<double>& outputs) {
    if (batch.rows == 0) throw EmptyDataError("cannot compute the loss of an empty batch");
    const auto losses = per_sample_losses(spec, batch, outputs);
    double sum = 0.0;
    for (double x : losses) sum += x;
    return sum / static_cast<double>(batch.rows);
}

LossAndGrads backward(const ParameterSet& params, const ModelSpec& spec, const Batch& batch,
                      const ForwardCache& cache) {
    const auto slots = resolve(params, spec);
    check_batch(spec, batch);
    if (cache.layers.size() != slots.size() || cache.rows != batch.rows) {
        throw InternalStateError("forward cache does not belong to this batch and model");
    }
    const auto rows = batch.rows;
    const auto out = spec.widths.back();
    const auto& outputs = cache.layers.back().pre_relu;

    LossAndGrads result;
    result.loss = batch_loss(spec, batch, outputs);
    const double inv_n = 1.0 / static_cast<double>(rows);

    std::vector<double> dy(rows * out);
    for (std::size_t n = 0; n < rows; ++n) {
        const double* o = outputs.data() + n * out;
        double* d = dy.data() + n * out;
        if (spec.loss == LossKind::CrossEntropy) {
            const double mx = *std::max_element(o, o + out);
            double sum = 0.0;
            for (std::size_t j = 0; j < out; ++j) {
                d[j] = std::exp(o[j] - mx);
                sum += d[j];
            }
            for (std::size_t j = 0; j < out; ++j) d[j] = d[j] / sum * inv_n;
            d[batch.labels[n]] -= inv_n;
        } else {
            for (std::size_t j = 0; j < out; ++j) d[j] = 2.0 * (o[j] - batch.targets[n * out + j]) * inv_n;
        }
    }

    std::vector<std::vector<double>> grads(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) grads[i].assign(params[i].tensor.size(), 0.0);

    for (std::size_t l = slots.size(); l-- > 0;) {
        const auto& s = slots[l];
        const auto& lc = cache.layers[l];
        const bool hidden = l + 1 < slots.size();
        if (hidden) {
            for (std::size_t k = 0; k < dy.size(); ++k) {
                if (!(lc.pre_relu[k] > 0.0)) dy[k] = 0.0;
            }
        }
        std::vector<double> dz;
        if (s.bn) {
            const auto gamma = params[s.gamma].tensor.values();
            auto& dgamma = grads[s.gamma];
            auto& dbeta = grads[s.beta];
            std::vector<double> dnormed(dy.size());
            for (std::size_t n = 0; n < rows; ++n) {
                for (std::size_t c = 0; c < s.fan_out; ++c) {
                    const auto k = n * s.fan_out + c;
                    dgamma[c] += dy[k] * lc.normed[k];
                    dbeta[c] += dy[k];
                    dnormed[k] = dy[k] * gamma[c];
                }
            }
            dz.resize(dy.size());
            if (cache.training) {
                std::vector<double> sum_d(s.fan_out, 0.0);
                std::vector<double> sum_dx(s.fan_out, 0.0);
                for (std::size_t n = 0; n < rows; ++n) {
                    for (std::size_t c = 0; c < s.fan_out; ++c) {
                        const auto k = n * s.fan_out + c;
                        sum_d[c] += dnormed[k];
                        sum_dx[c] += dnormed[k] * lc.normed[k];
                    }
                }
                for (std::size_t n = 0; n < rows; ++n) {
                    for (std::size_t c = 0; c < s.fan_out; ++c) {
                        const auto k = n * s.fan_out + c;
                        dz[k] = lc.inv_std[c] * inv_n *
                                (static_cast<double>(rows) * dnormed[k] - sum_d[c] - lc.normed[k] * sum_dx[c]);
                    }
                }
            } else {
                for (std::size_t n = 0; n < rows; ++n) {
                    for (std::size_t c = 0; c < s.fan_out; ++c) {
                        const auto k = n * s.fan_out + c;
                        dz[k] = dnormed[k] * lc.inv_std[c];
                    }
                }
            }
        } else {
            dz = std::move(dy);
        }

        auto& dw = grads[s.weight];
        auto& db = grads[s.bias];
        for (std::size_t n = 0; n < rows; ++n) {
            const double* x = lc.input.data() + n * s.fan_in;
            for (std::size_t o = 0; o < s.fan_out; ++o) {
                const double g = dz[n * s.fan_out + o];
                db[o] += g;
                double* wrow = dw.data() + o * s.fan_in;
                for (std::size_t i = 0; i < s.fan_in; ++i) wrow[i] += g * x[i];
            }
        }
        if (l > 0) {
            const auto w = params[s.weight].tensor.values();
            dy.assign(rows * s.fan_in, 0.0);
            for (std::size_t n = 0; n < rows; ++n) {
                double* d = dy.data() + n * s.fan_in;
                for (std::size_t o = 0; o < s.fan_out; ++o) {
                    const double g = dz[n * s.fan_out + o];
                    const double* wrow = w.data() + o * s.fan_in;
                    for (std::size_t i = 0; i < s.fan_in; ++i) d[i] += g * wrow[i];
                }
            }
        }
    }
    result.grads = params.with_values(std::move(grads));
    return result;
}

ParameterSet update_running_stats(const ParameterSet& params, const ModelSpec& spec, const ForwardCache& cache,
                                  double momentum) {
    const auto slots = resolve(params, spec);
    if (!cache.training) return params;
    auto updated = params;
    for (std::size_t l = 0; l < slots.size(); ++l) {
        const auto& s = slots[l];
        if (!s.bn) continue;
        const auto& lc = cache.layers.at(l);
        auto blend = [&](std::size_t idx, const std::vector<double>& batch_stat) {
            const auto r = params[idx].tensor.values();
            std::vector<double> next(r.size());
            for (std::size_t c = 0; c < r.size(); ++c) next[c] = (1.0 - momentum) * r[c] + momentum * batch_stat[c];
            updated = updated.with_tensor(idx, params[idx].tensor.with_values(std::move(next)));
        };
        blend(s.mean, lc.batch_mean);
        blend(s.var, lc.batch_var);
    }
    return updated;
}

ParameterSet recompute_bn_stats(const ParameterSet& params, const ModelSpec& spec, const Batch& data) {
    const auto slots = resolve(params, spec);
    check_batch(spec, data);
    if (!spec.has_bn()) return params;
    if (data.rows == 0) throw EmptyDataError("cannot recompute batch-norm statistics from an empty dataset");

    auto updated = params;
    std::vector<double> h = data.features;
    for (std::size_t l = 0; l + 1 < slots.size(); ++l) {
        const auto& s = slots[l];
        auto z = affine(h, data.rows, params[s.weight].tensor.values(), params[s.bias].tensor.values(), s.fan_in,
                        s.fan_out);
        if (s.bn) {
            std::vector<double> mean;
            std::vector<double> var;
            column_stats(z, data.rows, s.fan_out, mean, var);
            const auto gamma = params[s.gamma].tensor.values();
            const auto beta = params[s.beta].tensor.values();
            std::vector<double> inv_std(s.fan_out);
            for (std::size_t c = 0; c < s.fan_out; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + kBnEpsilon);
            for (std::size_t n = 0; n < data.rows; ++n) {
                for (std::size_t c = 0; c < s.fan_out; ++c) {
                    auto& v = z[n * s.fan_out + c];
                    v = gamma[c] * ((v - mean[c]) * inv_std[c]) + beta[c];
                }
            }
            updated = updated.with_tensor(s.mean, params[s.mean].tensor.with_values(std::move(mean)));
            updated = updated.with_tensor(s.var, params[s.var].tensor.with_values(std::move(var)));
        }
        check_finite(z, l);
        h.resize(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) h[k] = z[k] > 0.0 ? z[k] : 0.0;
    }
    return updated;
}

ParameterSet copy_bn_stats(const ParameterSet& target, const ParameterSet& source) {
    require_same_structure(target, source);
    auto out = target;
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (is_bn_statistic(target[i].name)) out = out.with_tensor(i, source[i].tensor);
    }
    return out;
}

EvalResult evaluate(const ParameterSet& params, const ModelSpec& spec, const Batch& data, std::size_t batch_size) {
    if (data.rows == 0) throw EmptyDataError("cannot evaluate on an empty dataset");
    check_targets(spec, data);
    const auto out = spec.widths.back();
    const std::size_t step = batch_size == 0 ? data.rows : batch_size;

    std::vector<double> losses;
    losses.reserve(data.rows);
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < data.rows; begin += step) {
        const auto end = std::min(data.rows, begin + step);
        const auto chunk = (begin == 0 && end == data.rows) ? data : slice_rows(data, begin, end, out);
        const auto fwd = forward(params, spec, chunk, false);
        const auto chunk_losses = per_sample_losses(spec, chunk, fwd.outputs);
        losses.insert(losses.end(), chunk_losses.begin(), chunk_losses.end());
        if (spec.loss == LossKind::CrossEntropy) {
            for (std::size_t n = 0; n < chunk.rows; ++n) {
                const double* o = fwd.outputs.data() + n * out;
                std::size_t best = 0;
                for (std::size_t j = 1; j < out; ++j) {
                    if (o[j] > o[best]) best = j;
                }
                if (static_cast<std::int32_t>(best) == chunk.labels[n]) ++correct;
            }
        }
    }
    EvalResult r;
    double sum = 0.0;
    for (double x : losses) sum += x;
    r.loss = sum / static_cast<double>(data.rows);
    if (spec.loss == LossKind::CrossEntropy) r.accuracy = static_cast<double>(correct) / static_cast<double>(data.rows);
    return r;
}

}  // namespace lawa
