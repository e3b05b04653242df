// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "engine/train.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "data/rng.hpp"
#include "param_core/checkpoint_io.hpp"
#include "param_core/errors.hpp"

namespace lawa {

const char* bn_mode_name(BnMode mode) noexcept {
    switch (mode) {
        case BnMode::Recompute: return "recompute";
        case BnMode::Copy: return "copy";
        case BnMode::Off: return "off";
    }
    return "off";
}

BnMode parse_bn_mode(std::string_view name) {
    if (name == "recompute") return BnMode::Recompute;
    if (name == "copy") return BnMode::Copy;
    if (name == "off") return BnMode::Off;
    throw ConfigError("unknown batch-norm mode '" + std::string(name) + "'");
}

BnMode RunConfig::effective_bn_mode() const noexcept {
    if (bn_mode) return *bn_mode;
    return batch_norm ? BnMode::Recompute : BnMode::Off;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_metrics_row(const MetricsRecord& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    std::string line;
    line += std::to_string(r.epoch) + ",";
    line += std::to_string(r.step) + ",";
    line += format_number(r.lr) + ",";
    line += format_number(r.train_loss) + ",";
    line += opt(r.train_acc) + ",";
    line += format_number(r.val_loss) + ",";
    line += opt(r.val_acc) + ",";
    line += opt(r.avg_val_loss) + ",";
    line += opt(r.avg_val_acc) + ",";
    line += format_number(r.wall_seconds);
    return line;
}

Dataset load_dataset(const RunConfig& config) {
    const auto& d = config.data;
    if (d.source == "spirals") {
        return make_spirals(d.seed.value_or(config.seed), d.n_per_class, d.classes, d.noise);
    }
    return load_csv(d.source, d.label_column);
}

ModelSpec model_spec_for(const RunConfig& config, const Dataset& data) {
    ModelSpec spec;
    spec.widths.push_back(data.dims);
    spec.widths.insert(spec.widths.end(), config.hidden.begin(), config.hidden.end());
    spec.widths.push_back(data.task == TaskKind::Classification ? data.classes : 1);
    spec.use_bn.assign(config.hidden.size(), config.batch_norm);
    spec.loss = data.task == TaskKind::Classification ? LossKind::CrossEntropy : LossKind::MeanSquaredError;
    spec.seed = config.seed;
    spec.validate();
    return spec;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t slot) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ckpt_e%05llu.lawa", static_cast<unsigned long long>(slot));
    return dir / buf;
}

std::filesystem::path averaged_path(const std::filesystem::path& dir, std::uint64_t slot) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "lawa_e%05llu.lawa", static_cast<unsigned long long>(slot));
    return dir / buf;
}

namespace {

Optimizer make_optimizer(const RunConfig& config) {
    auto inner = config.optimizer == OptimizerKind::Sgd ? Optimizer::sgd(SgdOptions{config.momentum})
                                                        : Optimizer::adam(config.adam);
    if (config.lookahead) return Optimizer::lookahead(std::move(inner), config.lookahead_options);
    return inner;
}

}  // namespace

TrainResult train_run(const RunConfig& config, const TrainHooks& hooks) {
    if (config.epochs < 1) throw ConfigError("epochs must be at least 1");
    if (config.batch_size < 1) throw ConfigError("batch size must be at least 1");

    TrainResult result;
    AveragingScheme scheme(config.scheme);
    result.warnings = scheme.warnings();

    const auto data = load_dataset(config);
    result.spec = model_spec_for(config, data);
    const auto& spec = result.spec;
    const auto steps_per_epoch = data.train.size() / config.batch_size;
    if (steps_per_epoch == 0) {
        throw ConfigError("batch size " + std::to_string(config.batch_size) + " exceeds the " +
                          std::to_string(data.train.size()) + " training samples");
    }
    LrSchedule schedule({config.schedule, config.lr, config.epochs * steps_per_epoch, config.warmup_steps,
                         config.end_lr, config.power});
    auto optimizer = make_optimizer(config);
    const auto bn_mode = config.effective_bn_mode();

    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw IoError("cannot create output directory '" + config.out.string() + "': " + ec.message());
    std::ofstream metrics_file(config.out / "metrics.csv", std::ios::trunc);
    if (!metrics_file) throw IoError("cannot write '" + (config.out / "metrics.csv").string() + "'");
    metrics_file << kMetricsHeader << '\n' << std::flush;

    const auto train_all = data.train_batch();
    const auto val_all = data.val_batch();
    auto params = init_params(spec);
    std::optional<ParameterSet> average;
    std::uint64_t step = 0;
    std::uint64_t slot = 0;
    const auto start = std::chrono::steady_clock::now();

    auto save_event = [&] {
        Checkpoint ckpt{params, slot, step};
        write_checkpoint(ckpt, checkpoint_path(config.out, slot));
        auto avg = scheme.absorb(ckpt);
        if (avg && spec.has_bn()) {
            if (bn_mode == BnMode::Recompute) {
                avg = recompute_bn_stats(*avg, spec, train_all);
            } else if (bn_mode == BnMode::Copy) {
                avg = copy_bn_stats(*avg, params);
            }
        }
        if (avg) {
            if (config.save_averaged) write_checkpoint({*avg, slot, step}, averaged_path(config.out, slot));
            average = avg;
        }
        if (hooks.on_save) hooks.on_save(ckpt, avg);
        ++slot;
    };

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        try {
            auto order = data.train;
            CounterRng shuffle(config.seed, "shuffle", epoch);
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

            double lr = 0.0;
            for (std::size_t b = 0; b < steps_per_epoch; ++b) {
                const auto batch = data.gather(std::span(order).subspan(b * config.batch_size, config.batch_size));
                lr = schedule.at(step);
                const auto fwd = forward(params, spec, batch, true);
                const auto lg = backward(params, spec, batch, fwd.cache);
                auto next = optimizer.step(params, lg.grads, lr);
                if (spec.has_bn()) next = copy_bn_stats(next, update_running_stats(params, spec, fwd.cache));
                params = std::move(next);
                ++step;
                if (config.save_every_steps > 0 && step % config.save_every_steps == 0) save_event();
            }
            if (config.save_every_steps == 0) save_event();

            MetricsRecord rec;
            rec.epoch = epoch;
            rec.step = step;
            rec.lr = lr;
            const auto train_eval = evaluate(params, spec, train_all);
            const auto val_eval = evaluate(params, spec, val_all);
            rec.train_loss = train_eval.loss;
            rec.train_acc = train_eval.accuracy;
            rec.val_loss = val_eval.loss;
            rec.val_acc = val_eval.accuracy;
            if (average) {
                const auto avg_eval = evaluate(*average, spec, val_all);
                rec.avg_val_loss = avg_eval.loss;
                rec.avg_val_acc = avg_eval.accuracy;
            }
            if (config.record_wall_time) {
                rec.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
            metrics_file << format_metrics_row(rec) << '\n' << std::flush;
            result.metrics.push_back(rec);
        } catch (const NonFiniteGradError& e) {
            throw NonFiniteGradError("training diverged in epoch " + std::to_string(epoch) + ": " + e.what());
        } catch (const NonFiniteError& e) {
            throw NonFiniteError("training diverged in epoch " + std::to_string(epoch) + ": " + e.what());
        }
    }
    result.final_params = std::move(params);
    result.final_average = std::move(average);
    return result;
}

}  // namespace lawa
