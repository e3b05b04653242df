// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// lawa: train, average, evaluate and compare runs through the C API.

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lawa.h"

namespace {

struct ConfigFlags {
    std::string file;
    std::map<std::string, std::string> values;  // key -> raw value, only flags given explicitly
};

constexpr const char* kConfigKeys[] = {
    "dataset",  "n_per_class", "classes",  "noise",        "label_column", "data_seed",       "hidden",
    "batch_norm", "optimizer", "lr",       "momentum",     "beta1",        "beta2",           "eps",
    "lookahead", "la_alpha",   "la_k",     "schedule",     "warmup_steps", "end_lr",          "power",
    "epochs",   "batch_size",  "seed",     "scheme",       "k",            "alpha",           "bn_mode",
    "save_every_steps", "save_averaged", "record_wall_time", "out",
};

std::string flag_name(std::string key) {
    for (auto& ch : key) {
        if (ch == '_') ch = '-';
    }
    return "--" + key;
}

void add_config_flags(CLI::App* cmd, ConfigFlags& flags, const std::set<std::string>& skip = {}) {
    cmd->add_option("--config", flags.file, "flat key=value file; explicit flags override it");
    for (const char* key : kConfigKeys) {
        const std::string k = key;
        if (skip.count(k)) continue;
        cmd->add_option_function<std::string>(
            flag_name(k), [&flags, k](const std::string& v) { flags.values[k] = v; }, "config key " + k);
    }
}

int report(lawa_status status) {
    if (status == LAWA_OK) return 0;
    std::fprintf(stderr, "lawa: error (%s): %s\n", lawa_status_name(status), lawa_last_error());
    return lawa_exit_code(status);
}

// Builds a config handle: defaults, then --config file, then explicit flags.
lawa_status build_config(const ConfigFlags& flags, lawa_config** out, bool print_warnings = true) {
    lawa_config* cfg = nullptr;
    auto st = lawa_config_create(&cfg);
    if (st != LAWA_OK) return st;
    if (!flags.file.empty()) st = lawa_config_load(cfg, flags.file.c_str());
    for (auto it = flags.values.begin(); st == LAWA_OK && it != flags.values.end(); ++it) {
        st = lawa_config_set(cfg, it->first.c_str(), it->second.c_str());
    }
    size_t warnings = 0;
    if (st == LAWA_OK) st = lawa_config_validate(cfg, &warnings);
    if (st != LAWA_OK) {
        lawa_config_destroy(cfg);
        return st;
    }
    if (print_warnings) {
        for (size_t i = 0; i < warnings; ++i) std::fprintf(stderr, "lawa: warning: %s\n", lawa_config_warning(cfg, i));
    }
    *out = cfg;
    return LAWA_OK;
}

template <typename F>
int with_config(const ConfigFlags& flags, F&& body) {
    lawa_config* cfg = nullptr;
    auto st = build_config(flags, &cfg);
    if (st == LAWA_OK) {
        st = body(cfg);
        lawa_config_destroy(cfg);
    }
    return report(st);
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.push_back(std::stod(part));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latest-weight averaging toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lawa_version()));

    ConfigFlags train_flags;
    auto* train = app.add_subcommand("train", "train a model and write metrics.csv, checkpoints, config.resolved");
    add_config_flags(train, train_flags);

    std::string avg_dir, avg_scheme = "uniform", avg_prefix = "ckpt_", avg_out;
    std::size_t avg_k = 6;
    double avg_alpha = 0.9;
    auto* average = app.add_subcommand("average", "average the k newest checkpoints in a directory");
    average->add_option("--dir", avg_dir, "checkpoint directory")->required();
    average->add_option("--k", avg_k, "number of checkpoints")->capture_default_str();
    average->add_option("--scheme", avg_scheme, "uniform, ema or polyak")->capture_default_str();
    average->add_option("--alpha", avg_alpha, "ema weight of the newer checkpoint")->capture_default_str();
    average->add_option("--prefix", avg_prefix, "candidate file prefix")->capture_default_str();
    average->add_option("--out", avg_out, "output checkpoint path")->required();

    ConfigFlags eval_flags;
    std::string eval_ckpt, eval_split = "val", eval_bn = "off", eval_train_data;
    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on the configured dataset");
    eval->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
    eval->add_option("--split", eval_split, "train, val or all")->capture_default_str();
    eval->add_option("--bn-mode", eval_bn, "recompute, copy or off")->capture_default_str();
    eval->add_option("--train-data", eval_train_data, "'config' or a CSV path for BN recomputation");
    add_config_flags(eval, eval_flags, {"out", "bn_mode"});

    std::vector<std::string> cmp_runs;
    std::string cmp_metric = "val_loss", cmp_avg_metric, cmp_targets, cmp_out;
    int cmp_higher = -1;
    std::size_t cmp_early = 0;
    auto* compare = app.add_subcommand("compare", "epoch savings of the averaged model over the baseline");
    compare->add_option("runs", cmp_runs, "metrics.csv files")->required();
    compare->add_option("--metric", cmp_metric, "baseline column")->capture_default_str();
    compare->add_option("--avg-metric", cmp_avg_metric, "averaged column (default avg_<metric>)");
    compare->add_option("--higher-is-better", cmp_higher, "1, 0, or -1 to infer");
    compare->add_option("--targets", cmp_targets, "comma-separated target values");
    compare->add_option("--early-epochs", cmp_early, "epochs reported separately as the early phase");
    compare->add_option("--out", cmp_out, "comparison CSV")->required();

    ConfigFlags schemes_flags;
    auto* schemes = app.add_subcommand("compare-schemes", "train with uniform and ema averaging; write schemes.csv");
    add_config_flags(schemes, schemes_flags);

    ConfigFlags sweep_flags;
    std::vector<std::size_t> sweep_ks{2, 6, 10, 20};
    auto* sweep = app.add_subcommand("sweep-k", "train one uniform run per k; write k_sweep.csv");
    add_config_flags(sweep, sweep_flags);
    sweep->add_option("--ks", sweep_ks, "window sizes")->delimiter(',')->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*train) {
        return with_config(train_flags, [](lawa_config* cfg) { return lawa_train(cfg, nullptr); });
    }
    if (*average) {
        return report(lawa_average_dir(avg_dir.c_str(), avg_k, avg_scheme.c_str(), avg_alpha, avg_prefix.c_str(),
                                       avg_out.c_str()));
    }
    if (*eval) {
        return with_config(eval_flags, [&](lawa_config* cfg) {
            double loss = 0.0, acc = 0.0;
            int has_acc = 0;
            const auto st = lawa_eval(eval_ckpt.c_str(), cfg, eval_split.c_str(), eval_bn.c_str(),
                                      eval_train_data.empty() ? nullptr : eval_train_data.c_str(), &loss, &acc,
                                      &has_acc);
            if (st == LAWA_OK) {
                std::printf("loss=%.17g\n", loss);
                if (has_acc) std::printf("accuracy=%.17g\n", acc);
            }
            return st;
        });
    }
    if (*compare) {
        std::vector<const char*> runs;
        for (const auto& r : cmp_runs) runs.push_back(r.c_str());
        std::vector<double> targets;
        try {
            targets = parse_doubles(cmp_targets);
        } catch (const std::exception&) {
            std::fprintf(stderr, "lawa: error (usage): --targets must be comma-separated numbers\n");
            return 2;
        }
        std::vector<uint64_t> savings(runs.size());
        const auto st = lawa_compare(runs.data(), runs.size(), cmp_metric.c_str(),
                                     cmp_avg_metric.empty() ? nullptr : cmp_avg_metric.c_str(), cmp_higher,
                                     targets.data(), targets.size(), cmp_early, cmp_out.c_str(), savings.data());
        if (st == LAWA_OK) {
            for (std::size_t i = 0; i < runs.size(); ++i) {
                std::printf("%s max_savings=%llu\n", runs[i], static_cast<unsigned long long>(savings[i]));
            }
        }
        return report(st);
    }
    if (*schemes) {
        const auto out = schemes_flags.values.count("out") ? schemes_flags.values.at("out") : std::string("schemes");
        return with_config(schemes_flags, [&](lawa_config* cfg) { return lawa_compare_schemes(cfg, out.c_str()); });
    }
    if (*sweep) {
        const auto out = sweep_flags.values.count("out") ? sweep_flags.values.at("out") : std::string("k_sweep");
        return with_config(sweep_flags,
                           [&](lawa_config* cfg) { return lawa_sweep_k(cfg, sweep_ks.data(), sweep_ks.size(), out.c_str()); });
    }
    return 2;
}
