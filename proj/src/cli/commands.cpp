// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "cli/run_config.hpp"
#include "param_core/checkpoint_io.hpp"

namespace lawa {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
    auto name = out.stem().string() + suffix + (out.has_extension() ? out.extension().string() : ".csv");
    return out.parent_path() / name;
}

std::optional<double> parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || end != cell.data() + cell.size()) {
        throw ParseError(row, col, "non-numeric cell '" + cell + "'");
    }
    return v;
}

std::string opt_text(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

template <typename T>
std::string opt_int(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string();
}

}  // namespace

int exit_status_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonFinite:
        case ErrorCode::NonFiniteGrad:
        case ErrorCode::InternalState: return 1;
        default: return 2;
    }
}

TrainResult run_training(const RunConfig& config, const TrainHooks& hooks) {
    validate_run_config(config);
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw IoError("cannot create output directory '" + config.out.string() + "': " + ec.message());
    write_text(config.out / "config.resolved", resolved_config_text(config));
    return train_run(config, hooks);
}

Checkpoint average_directory(const AverageOptions& options) {
    if (options.k < 1) throw ConfigError("k must be at least 1");
    if (options.scheme == SchemeKind::None) throw ConfigError("offline averaging needs a scheme other than none");
    if (options.scheme == SchemeKind::Ema && !(options.alpha >= 0.0 && options.alpha <= 1.0)) {
        throw ConfigError("ema alpha must lie in [0, 1]");
    }
    std::error_code ec;
    if (!std::filesystem::is_directory(options.dir, ec)) {
        throw IoError("'" + options.dir.string() + "' is not a directory");
    }

    std::vector<std::filesystem::path> candidates;
    for (const auto& entry : std::filesystem::directory_iterator(options.dir)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (entry.path().extension() != ".lawa" || !name.starts_with(options.prefix)) continue;
        if (!options.out.empty() && std::filesystem::equivalent(entry.path(), options.out, ec)) continue;
        candidates.push_back(entry.path());
    }
    if (candidates.size() < options.k) {
        throw InsufficientCheckpoints("found " + std::to_string(candidates.size()) + " checkpoint files in '" +
                                      options.dir.string() + "', need k=" + std::to_string(options.k));
    }

    std::vector<Checkpoint> ckpts;
    ckpts.reserve(candidates.size());
    for (const auto& p : candidates) ckpts.push_back(read_checkpoint(p));
    std::vector<std::size_t> order(ckpts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ckpts[a].epoch < ckpts[b].epoch; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (ckpts[order[i]].epoch == ckpts[order[i - 1]].epoch) {
            throw EpochOrderError("two checkpoint files carry epoch " + std::to_string(ckpts[order[i]].epoch) + ": '" +
                                  candidates[order[i - 1]].string() + "' and '" + candidates[order[i]].string() + "'");
        }
    }

    std::vector<Checkpoint> selected;
    for (std::size_t i = order.size() - options.k; i < order.size(); ++i) selected.push_back(std::move(ckpts[order[i]]));
    for (std::size_t i = 1; i < selected.size(); ++i) require_same_structure(selected.front().params, selected[i].params);

    Checkpoint result;
    result.epoch = selected.back().epoch;
    result.step = selected.back().step;
    if (options.scheme == SchemeKind::Uniform) {
        result.params = uniform_average(std::span<const Checkpoint>(selected));
    } else {
        AveragingScheme scheme({options.scheme, options.k, options.alpha});
        for (const auto& c : selected) result.params = *scheme.absorb(c);
    }
    if (!options.out.empty()) write_checkpoint(result, options.out);
    return result;
}

EvalResult evaluate_checkpoint(const EvalOptions& options) {
    if (options.bn_mode == BnMode::Recompute && !options.train_data) {
        throw UsageError("--train-data is required with --bn-mode recompute");
    }
    const auto ckpt = read_checkpoint(options.checkpoint);
    const auto data = load_dataset(options.config);
    const auto spec = model_spec_for(options.config, data);
    auto params = ckpt.params.cast(DType::F64);

    if (options.bn_mode == BnMode::Recompute) {
        Batch bn_data;
        if (*options.train_data == "config") {
            bn_data = data.train_batch();
        } else {
            const auto extra = load_csv(*options.train_data, options.config.data.label_column);
            std::vector<std::size_t> all(extra.rows);
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            bn_data = extra.gather(all);
        }
        params = recompute_bn_stats(params, spec, bn_data);
    }

    Batch eval_data;
    if (options.split == "val") {
        eval_data = data.val_batch();
    } else if (options.split == "train") {
        eval_data = data.train_batch();
    } else if (options.split == "all") {
        std::vector<std::size_t> all(data.rows);
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        eval_data = data.gather(all);
    } else {
        throw UsageError("split must be train, val, or all (got '" + options.split + "')");
    }
    return evaluate(params, spec, eval_data, options.batch_size);
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            auto cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            out.push_back(std::move(cell));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    };
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path.string() + "' has no header row");
    t.header = split(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw ParseError(line_no, cells.size(), "expected " + std::to_string(t.header.size()) + " fields");
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

RunComparison compare_columns(const std::vector<double>& baseline, const std::vector<std::optional<double>>& averaged,
                              bool higher_is_better, std::size_t early_epochs, const std::vector<double>& targets) {
    if (baseline.size() != averaged.size()) throw InternalStateError("metric columns differ in length");
    auto at_least_as_good = [&](double candidate, double reference) {
        return higher_is_better ? candidate >= reference : candidate <= reference;
    };
    const auto horizon = baseline.size();
    RunComparison cmp;
    for (std::size_t e = 0; e < horizon; ++e) {
        EpochSaving row;
        row.epoch = e;
        row.baseline = baseline[e];
        row.averaged = averaged[e];
        if (!averaged[e]) {
            row.phase = "undefined";
        } else {
            row.phase = e < early_epochs ? "early" : "main";
            for (std::size_t b = 0; b < horizon; ++b) {
                if (at_least_as_good(baseline[b], *averaged[e])) {
                    row.match_epoch = b;
                    break;
                }
            }
            if (row.match_epoch) {
                row.lag = static_cast<std::int64_t>(*row.match_epoch) - static_cast<std::int64_t>(e);
                row.savings = row.lag > 0 ? static_cast<std::uint64_t>(row.lag) : 0;
            } else {
                row.censored = true;
                row.lag = static_cast<std::int64_t>(horizon - e);
                row.savings = horizon - e;
            }
            if (row.phase == "main" && (!cmp.max_savings_epoch || row.savings > cmp.max_savings)) {
                cmp.max_savings = row.savings;
                cmp.max_savings_epoch = e;
            }
        }
        cmp.epochs.push_back(std::move(row));
    }
    for (double target : targets) {
        TargetReach reach{target, std::nullopt, std::nullopt};
        for (std::size_t e = 0; e < horizon; ++e) {
            if (!reach.baseline_epoch && at_least_as_good(baseline[e], target)) reach.baseline_epoch = e;
            if (!reach.averaged_epoch && averaged[e] && at_least_as_good(*averaged[e], target)) reach.averaged_epoch = e;
        }
        cmp.targets.push_back(reach);
    }
    return cmp;
}

std::vector<RunComparison> compare_runs(const CompareOptions& options) {
    if (options.runs.empty()) throw UsageError("compare needs at least one metrics file");
    const auto avg_metric = options.averaged_metric.value_or("avg_" + options.metric);
    const bool higher = options.higher_is_better.value_or(options.metric.find("acc") != std::string::npos);

    std::vector<RunComparison> results;
    for (const auto& run : options.runs) {
        const auto table = read_csv_table(run);
        const auto base_col = table.column(options.metric);
        const auto avg_col = table.column(avg_metric);
        if (!base_col) throw SchemaError("'" + run.string() + "' has no column '" + options.metric + "'");
        if (!avg_col) throw SchemaError("'" + run.string() + "' has no column '" + avg_metric + "'");
        if (const auto epoch_col = table.column("epoch")) {
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                if (table.rows[r][*epoch_col] != std::to_string(r)) {
                    throw SchemaError("'" + run.string() + "': epochs are not contiguous from 0 at row " +
                                      std::to_string(r + 2));
                }
            }
        }
        std::vector<double> baseline;
        std::vector<std::optional<double>> averaged;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto b = parse_cell(table.rows[r][*base_col], r + 2, *base_col + 1);
            if (!b) throw ParseError(r + 2, *base_col + 1, "baseline metric is empty");
            baseline.push_back(*b);
            averaged.push_back(parse_cell(table.rows[r][*avg_col], r + 2, *avg_col + 1));
        }
        auto cmp = compare_columns(baseline, averaged, higher, options.early_epochs, options.targets);
        cmp.run = run;
        results.push_back(std::move(cmp));
    }

    if (!options.out.empty()) {
        if (options.out.has_parent_path()) std::filesystem::create_directories(options.out.parent_path());
        std::string rows = "run,epoch,phase,baseline,averaged,match_epoch,lag,savings,censored\n";
        std::string summary = "run,max_savings,max_savings_epoch,main_epochs,early_epochs,early_mean_lag\n";
        std::string targets = "run,target,baseline_epoch,averaged_epoch,savings\n";
        for (const auto& cmp : results) {
            const auto name = cmp.run.string();
            std::size_t main_rows = 0;
            std::size_t early_rows = 0;
            double early_lag = 0.0;
            for (const auto& r : cmp.epochs) {
                rows += name + "," + std::to_string(r.epoch) + "," + r.phase + "," + format_number(r.baseline) + "," +
                        opt_text(r.averaged) + "," + opt_int(r.match_epoch) + "," +
                        (r.averaged ? std::to_string(r.lag) : std::string()) + "," +
                        (r.averaged ? std::to_string(r.savings) : std::string()) + "," +
                        (r.averaged ? (r.censored ? "1" : "0") : "") + "\n";
                if (r.phase == "main") ++main_rows;
                if (r.phase == "early") {
                    ++early_rows;
                    early_lag += static_cast<double>(r.lag);
                }
            }
            summary += name + "," + std::to_string(cmp.max_savings) + "," + opt_int(cmp.max_savings_epoch) + "," +
                       std::to_string(main_rows) + "," + std::to_string(early_rows) + "," +
                       (early_rows ? format_number(early_lag / static_cast<double>(early_rows)) : std::string()) +
                       "\n";
            for (const auto& t : cmp.targets) {
                std::string saved;
                if (t.baseline_epoch && t.averaged_epoch) {
                    saved = std::to_string(static_cast<std::int64_t>(*t.baseline_epoch) -
                                           static_cast<std::int64_t>(*t.averaged_epoch));
                }
                targets += name + "," + format_number(t.target) + "," + opt_int(t.baseline_epoch) + "," +
                           opt_int(t.averaged_epoch) + "," + saved + "\n";
            }
        }
        write_text(options.out, rows);
        write_text(sibling(options.out, "_summary"), summary);
        if (!options.targets.empty()) write_text(sibling(options.out, "_targets"), targets);
    }
    return results;
}

std::filesystem::path compare_schemes(const RunConfig& base, const std::filesystem::path& out) {
    auto uniform = base;
    uniform.scheme.kind = SchemeKind::Uniform;
    uniform.out = out / "uniform";
    auto ema = base;
    ema.scheme.kind = SchemeKind::Ema;
    ema.out = out / "ema";
    const auto u = run_training(uniform);
    const auto x = run_training(ema);

    std::string csv = "epoch,val_loss,uniform_avg_val_loss,ema_avg_val_loss,val_acc,uniform_avg_val_acc,ema_avg_val_acc\n";
    for (std::size_t e = 0; e < u.metrics.size(); ++e) {
        const auto& a = u.metrics[e];
        const auto& b = x.metrics[e];
        csv += std::to_string(a.epoch) + "," + format_number(a.val_loss) + "," + opt_text(a.avg_val_loss) + "," +
               opt_text(b.avg_val_loss) + "," + opt_text(a.val_acc) + "," + opt_text(a.avg_val_acc) + "," +
               opt_text(b.avg_val_acc) + "\n";
    }
    const auto path = out / "schemes.csv";
    write_text(path, csv);
    return path;
}

std::filesystem::path sweep_k(const RunConfig& base, const std::vector<std::size_t>& ks,
                              const std::filesystem::path& out) {
    if (ks.empty()) throw UsageError("k sweep needs at least one k");
    std::vector<TrainResult> runs;
    for (auto k : ks) {
        auto c = base;
        c.scheme.kind = SchemeKind::Uniform;
        c.scheme.k = k;
        c.out = out / ("k" + std::to_string(k));
        runs.push_back(run_training(c));
    }
    std::string csv = "epoch,val_loss";
    for (auto k : ks) csv += ",k" + std::to_string(k) + "_avg_val_loss";
    csv += "\n";
    for (std::size_t e = 0; e < runs.front().metrics.size(); ++e) {
        csv += std::to_string(e) + "," + format_number(runs.front().metrics[e].val_loss);
        for (const auto& r : runs) csv += "," + opt_text(r.metrics[e].avg_val_loss);
        csv += "\n";
    }
    const auto path = out / "k_sweep.csv";
    write_text(path, csv);
    return path;
}

}  // namespace lawa
