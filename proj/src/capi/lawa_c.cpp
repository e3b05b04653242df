// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "lawa.h"

#include <cstring>
#include <filesystem>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "avg/averaging.hpp"
#include "avg/checkpoint_ring.hpp"
#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "param_core/checkpoint_io.hpp"
#include "param_core/errors.hpp"
#include "param_core/parameter_set.hpp"

struct lawa_params {
    lawa::ParameterSet set;
};

struct lawa_ring {
    lawa::CheckpointRing ring;
};

struct lawa_scheme {
    lawa::AveragingScheme scheme;
};

struct lawa_config {
    lawa::RunConfig config;
    std::vector<std::string> warnings;
};

namespace {

thread_local std::string g_last_error;

lawa_status fail(lawa_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <typename F>
lawa_status guarded(F&& body) noexcept {
    try {
        body();
        return LAWA_OK;
    } catch (const lawa::Error& e) {
        return fail(static_cast<lawa_status>(e.code()), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(LAWA_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(LAWA_ERR_UNKNOWN, "out of memory");
    } catch (const std::exception& e) {
        return fail(LAWA_ERR_UNKNOWN, e.what());
    } catch (...) {
        return fail(LAWA_ERR_UNKNOWN, "unknown failure");
    }
}

#define LAWA_REQUIRE(cond) \
    if (!(cond)) return fail(LAWA_ERR_INVALID_ARGUMENT, "null argument: " #cond)

lawa_params* wrap(lawa::ParameterSet set) { return new lawa_params{std::move(set)}; }

}  // namespace

extern "C" {

const char* lawa_version(void) { return "1.0.0"; }

const char* lawa_last_error(void) { return g_last_error.c_str(); }

const char* lawa_status_name(lawa_status status) {
    switch (status) {
        case LAWA_OK: return "ok";
        case LAWA_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case LAWA_ERR_UNKNOWN: return "unknown";
        default: break;
    }
    if (status >= LAWA_ERR_STRUCTURE_MISMATCH && status <= LAWA_ERR_USAGE) {
        return lawa::error_code_name(static_cast<lawa::ErrorCode>(status));
    }
    return "unknown";
}

int lawa_exit_code(lawa_status status) {
    if (status == LAWA_OK) return 0;
    if (status >= LAWA_ERR_STRUCTURE_MISMATCH && status <= LAWA_ERR_USAGE) {
        return lawa::exit_status_for(static_cast<lawa::ErrorCode>(status));
    }
    return status == LAWA_ERR_UNKNOWN ? 1 : 2;
}

// ---- parameter sets ----

lawa_status lawa_params_create(lawa_params** out) {
    LAWA_REQUIRE(out);
    return guarded([&] { *out = new lawa_params{}; });
}

void lawa_params_destroy(lawa_params* params) { delete params; }

lawa_status lawa_params_add(lawa_params* params, const char* name, lawa_dtype dtype, const uint64_t* dims,
                            uint32_t rank, const double* values) {
    LAWA_REQUIRE(params && name);
    LAWA_REQUIRE(dims || rank == 0);
    if (dtype != LAWA_F32 && dtype != LAWA_F64) return fail(LAWA_ERR_INVALID_ARGUMENT, "unknown dtype");
    return guarded([&] {
        lawa::Shape shape(dims, dims + rank);
        const auto n = lawa::element_count(shape);
        if (n > 0 && !values) throw lawa::UsageError("values must not be null for a nonempty tensor");
        std::vector<double> data(values, values + n);
        std::vector<lawa::Entry> entries(params->set.begin(), params->set.end());
        entries.push_back({name, lawa::Tensor(static_cast<lawa::DType>(dtype), std::move(shape), std::move(data))});
        params->set = lawa::ParameterSet(std::move(entries));
    });
}

size_t lawa_params_count(const lawa_params* params) { return params ? params->set.size() : 0; }

lawa_status lawa_params_entry(const lawa_params* params, size_t index, const char** name, lawa_dtype* dtype,
                              uint32_t* rank, const uint64_t** dims, const double** values, uint64_t* count) {
    LAWA_REQUIRE(params);
    if (index >= params->set.size()) {
        return fail(LAWA_ERR_INVALID_ARGUMENT, "entry index " + std::to_string(index) + " out of range");
    }
    const auto& e = params->set[index];
    if (name) *name = e.name.c_str();
    if (dtype) *dtype = static_cast<lawa_dtype>(e.tensor.dtype());
    if (rank) *rank = static_cast<uint32_t>(e.tensor.shape().size());
    if (dims) *dims = e.tensor.shape().data();
    if (values) *values = e.tensor.values().data();
    if (count) *count = e.tensor.size();
    return LAWA_OK;
}

lawa_status lawa_params_add_scaled(const lawa_params* dst, const lawa_params* src, double c, lawa_params** out) {
    LAWA_REQUIRE(dst && src && out);
    return guarded([&] { *out = wrap(lawa::add_scaled(dst->set, src->set, c)); });
}

lawa_status lawa_params_scale(const lawa_params* params, double c, lawa_params** out) {
    LAWA_REQUIRE(params && out);
    return guarded([&] { *out = wrap(lawa::scale(params->set, c)); });
}

lawa_status lawa_params_l2_distance(const lawa_params* a, const lawa_params* b, double* out) {
    LAWA_REQUIRE(a && b && out);
    return guarded([&] { *out = lawa::l2_distance(a->set, b->set); });
}

lawa_status lawa_params_equal(const lawa_params* a, const lawa_params* b, int* out) {
    LAWA_REQUIRE(a && b && out);
    *out = a->set == b->set ? 1 : 0;
    return LAWA_OK;
}

// ---- checkpoint files ----

lawa_status lawa_checkpoint_write(const char* path, const lawa_params* params, uint64_t epoch, uint64_t step) {
    LAWA_REQUIRE(path && params);
    return guarded([&] { lawa::write_checkpoint({params->set, epoch, step}, path); });
}

lawa_status lawa_checkpoint_read(const char* path, lawa_params** out, uint64_t* epoch, uint64_t* step) {
    LAWA_REQUIRE(path && out);
    return guarded([&] {
        auto c = lawa::read_checkpoint(path);
        if (epoch) *epoch = c.epoch;
        if (step) *step = c.step;
        *out = wrap(std::move(c.params));
    });
}

// ---- averaging ----

lawa_status lawa_ring_create(size_t capacity, lawa_ring** out) {
    LAWA_REQUIRE(out);
    return guarded([&] { *out = new lawa_ring{lawa::CheckpointRing(capacity)}; });
}

void lawa_ring_destroy(lawa_ring* ring) { delete ring; }

lawa_status lawa_ring_push(lawa_ring* ring, const lawa_params* params, uint64_t epoch, uint64_t step) {
    LAWA_REQUIRE(ring && params);
    return guarded([&] { ring->ring.push({params->set, epoch, step}); });
}

size_t lawa_ring_size(const lawa_ring* ring) { return ring ? ring->ring.size() : 0; }

lawa_status lawa_lawa_step(const lawa_ring* ring, uint64_t epoch, size_t k, lawa_params** out) {
    LAWA_REQUIRE(ring && out);
    return guarded([&] {
        auto avg = lawa::lawa_step(ring->ring, epoch, k);
        *out = avg ? wrap(std::move(*avg)) : nullptr;
    });
}

lawa_status lawa_uniform_average(const lawa_params* const* sets, size_t n, lawa_params** out) {
    LAWA_REQUIRE(sets && out);
    return guarded([&] {
        std::vector<lawa::Checkpoint> ckpts;
        ckpts.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            if (!sets[i]) throw lawa::UsageError("parameter set " + std::to_string(i) + " is null");
            ckpts.push_back({sets[i]->set, i, 0});
        }
        *out = wrap(lawa::uniform_average(std::span<const lawa::Checkpoint>(ckpts)));
    });
}

lawa_status lawa_scheme_create(const char* kind, size_t k, double alpha, lawa_scheme** out) {
    LAWA_REQUIRE(kind && out);
    return guarded([&] {
        *out = new lawa_scheme{lawa::AveragingScheme({lawa::parse_scheme_kind(kind), k, alpha})};
    });
}

void lawa_scheme_destroy(lawa_scheme* scheme) { delete scheme; }

lawa_status lawa_scheme_absorb(lawa_scheme* scheme, const lawa_params* params, uint64_t epoch, uint64_t step,
                               lawa_params** out) {
    LAWA_REQUIRE(scheme && params && out);
    return guarded([&] {
        auto avg = scheme->scheme.absorb({params->set, epoch, step});
        *out = avg ? wrap(std::move(*avg)) : nullptr;
    });
}

// ---- run configuration ----

lawa_status lawa_config_create(lawa_config** out) {
    LAWA_REQUIRE(out);
    return guarded([&] { *out = new lawa_config{}; });
}

void lawa_config_destroy(lawa_config* config) { delete config; }

lawa_status lawa_config_set(lawa_config* config, const char* key, const char* value) {
    LAWA_REQUIRE(config && key && value);
    return guarded([&] { lawa::apply_config_value(config->config, key, value); });
}

lawa_status lawa_config_load(lawa_config* config, const char* path) {
    LAWA_REQUIRE(config && path);
    return guarded([&] { lawa::apply_config_file(config->config, path); });
}

lawa_status lawa_config_validate(lawa_config* config, size_t* warning_count) {
    LAWA_REQUIRE(config);
    return guarded([&] {
        config->warnings = lawa::validate_run_config(config->config);
        if (warning_count) *warning_count = config->warnings.size();
    });
}

const char* lawa_config_warning(const lawa_config* config, size_t index) {
    if (!config || index >= config->warnings.size()) return nullptr;
    return config->warnings[index].c_str();
}

lawa_status lawa_config_resolved(const lawa_config* config, char* buffer, size_t capacity, size_t* needed) {
    LAWA_REQUIRE(config);
    return guarded([&] {
        const auto text = lawa::resolved_config_text(config->config);
        if (needed) *needed = text.size() + 1;
        if (buffer && capacity > 0) {
            const auto n = std::min(capacity - 1, text.size());
            std::memcpy(buffer, text.data(), n);
            buffer[n] = '\0';
        }
    });
}

// ---- commands ----

lawa_status lawa_train(const lawa_config* config, size_t* epochs_completed) {
    LAWA_REQUIRE(config);
    return guarded([&] {
        const auto result = lawa::run_training(config->config);
        if (epochs_completed) *epochs_completed = result.metrics.size();
    });
}

lawa_status lawa_average_dir(const char* dir, size_t k, const char* scheme, double alpha, const char* prefix,
                             const char* out) {
    LAWA_REQUIRE(dir && scheme && out);
    return guarded([&] {
        lawa::AverageOptions opts;
        opts.dir = dir;
        opts.k = k;
        opts.scheme = lawa::parse_scheme_kind(scheme);
        opts.alpha = alpha;
        if (prefix) opts.prefix = prefix;
        opts.out = out;
        lawa::average_directory(opts);
    });
}

lawa_status lawa_eval(const char* checkpoint, const lawa_config* config, const char* split, const char* bn_mode,
                      const char* train_data, double* loss, double* accuracy, int* has_accuracy) {
    LAWA_REQUIRE(checkpoint && config);
    return guarded([&] {
        lawa::EvalOptions opts;
        opts.checkpoint = checkpoint;
        opts.config = config->config;
        if (split) opts.split = split;
        if (bn_mode) opts.bn_mode = lawa::parse_bn_mode(bn_mode);
        if (train_data) opts.train_data = std::string(train_data);
        const auto r = lawa::evaluate_checkpoint(opts);
        if (loss) *loss = r.loss;
        if (accuracy) *accuracy = r.accuracy.value_or(0.0);
        if (has_accuracy) *has_accuracy = r.accuracy ? 1 : 0;
    });
}

lawa_status lawa_compare(const char* const* runs, size_t n_runs, const char* metric, const char* averaged_metric,
                         int higher_is_better, const double* targets, size_t n_targets, size_t early_epochs,
                         const char* out, uint64_t* max_savings) {
    LAWA_REQUIRE(runs && out);
    LAWA_REQUIRE(targets || n_targets == 0);
    return guarded([&] {
        lawa::CompareOptions opts;
        for (size_t i = 0; i < n_runs; ++i) {
            if (!runs[i]) throw lawa::UsageError("run path " + std::to_string(i) + " is null");
            opts.runs.emplace_back(runs[i]);
        }
        if (metric) opts.metric = metric;
        if (averaged_metric) opts.averaged_metric = std::string(averaged_metric);
        if (higher_is_better >= 0) opts.higher_is_better = higher_is_better != 0;
        opts.targets.assign(targets, targets + n_targets);
        opts.early_epochs = early_epochs;
        opts.out = out;
        const auto results = lawa::compare_runs(opts);
        if (max_savings) {
            for (size_t i = 0; i < results.size(); ++i) max_savings[i] = results[i].max_savings;
        }
    });
}

lawa_status lawa_compare_schemes(const lawa_config* config, const char* out_dir) {
    LAWA_REQUIRE(config && out_dir);
    return guarded([&] { lawa::compare_schemes(config->config, out_dir); });
}

lawa_status lawa_sweep_k(const lawa_config* config, const size_t* ks, size_t n, const char* out_dir) {
    LAWA_REQUIRE(config && ks && out_dir);
    return guarded([&] { lawa::sweep_k(config->config, std::vector<std::size_t>(ks, ks + n), out_dir); });
}

}  // extern "C"
