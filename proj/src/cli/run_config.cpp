// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "param_core/errors.hpp"

namespace lawa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
    throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "': expected " +
                      expected);
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out)) {
        bad_value(key, v, "a finite number");
    }
    return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || end != v.data() + v.size()) bad_value(key, v, "a nonnegative integer");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, v, "true or false");
}

std::vector<std::size_t> to_widths(std::string_view key, std::string_view v) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const auto part = trim(v.substr(start, comma == v.npos ? v.npos : comma - start));
        const auto w = to_uint(key, part);
        if (w == 0) bad_value(key, v, "a comma-separated list of positive widths");
        out.push_back(static_cast<std::size_t>(w));
        if (comma == v.npos) break;
        start = comma + 1;
    }
    return out;
}

std::string num(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string widths_text(const std::vector<std::size_t>& widths) {
    std::string s;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(widths[i]);
    }
    return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "dataset",     "n_per_class",  "classes",      "noise",        "label_column",    "data_seed",
        "hidden",      "batch_norm",   "optimizer",    "lr",           "momentum",        "beta1",
        "beta2",       "eps",          "lookahead",    "la_alpha",     "la_k",            "schedule",
        "warmup_steps", "end_lr",      "power",        "epochs",       "batch_size",      "seed",
        "scheme",      "k",            "alpha",        "bn_mode",      "save_every_steps", "save_averaged",
        "record_wall_time", "out",
    };
    return keys;
}

void apply_config_value(RunConfig& c, std::string_view key, std::string_view raw) {
    const auto v = trim(raw);
    if (key == "dataset") c.data.source = std::string(v);
    else if (key == "n_per_class") c.data.n_per_class = to_uint(key, v);
    else if (key == "classes") c.data.classes = to_uint(key, v);
    else if (key == "noise") c.data.noise = to_double(key, v);
    else if (key == "label_column") c.data.label_column = std::string(v);
    else if (key == "data_seed") c.data.seed = to_uint(key, v);
    else if (key == "hidden") c.hidden = to_widths(key, v);
    else if (key == "batch_norm") c.batch_norm = to_bool(key, v);
    else if (key == "optimizer") c.optimizer = parse_optimizer_kind(v);
    else if (key == "lr") c.lr = to_double(key, v);
    else if (key == "momentum") c.momentum = to_double(key, v);
    else if (key == "beta1") c.adam.beta1 = to_double(key, v);
    else if (key == "beta2") c.adam.beta2 = to_double(key, v);
    else if (key == "eps") c.adam.eps = to_double(key, v);
    else if (key == "lookahead") c.lookahead = to_bool(key, v);
    else if (key == "la_alpha") c.lookahead_options.alpha = to_double(key, v);
    else if (key == "la_k") c.lookahead_options.k = to_uint(key, v);
    else if (key == "schedule") c.schedule = parse_schedule_kind(v);
    else if (key == "warmup_steps") c.warmup_steps = to_uint(key, v);
    else if (key == "end_lr") c.end_lr = to_double(key, v);
    else if (key == "power") c.power = to_double(key, v);
    else if (key == "epochs") c.epochs = to_uint(key, v);
    else if (key == "batch_size") c.batch_size = to_uint(key, v);
    else if (key == "seed") c.seed = to_uint(key, v);
    else if (key == "scheme") c.scheme.kind = parse_scheme_kind(v);
    else if (key == "k") c.scheme.k = to_uint(key, v);
    else if (key == "alpha") c.scheme.alpha = to_double(key, v);
    else if (key == "bn_mode") c.bn_mode = parse_bn_mode(v);
    else if (key == "save_every_steps") c.save_every_steps = to_uint(key, v);
    else if (key == "save_averaged") c.save_averaged = to_bool(key, v);
    else if (key == "record_wall_time") c.record_wall_time = to_bool(key, v);
    else if (key == "out") c.out = std::string(v);
    else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& config, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == text.npos) nl = text.size();
        const auto line = trim(text.substr(start, nl - start));
        start = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == line.npos) {
            throw ConfigError("config line " + std::to_string(line_no) + " is not key=value: '" + std::string(line) +
                              "'");
        }
        apply_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str());
}

std::vector<std::pair<std::string, std::string>> resolved_values(const RunConfig& c) {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    return {
        {"dataset", c.data.source},
        {"n_per_class", std::to_string(c.data.n_per_class)},
        {"classes", std::to_string(c.data.classes)},
        {"noise", num(c.data.noise)},
        {"label_column", c.data.label_column},
        {"data_seed", std::to_string(c.data.seed.value_or(c.seed))},
        {"hidden", widths_text(c.hidden)},
        {"batch_norm", b(c.batch_norm)},
        {"optimizer", optimizer_kind_name(c.optimizer)},
        {"lr", num(c.lr)},
        {"momentum", num(c.momentum)},
        {"beta1", num(c.adam.beta1)},
        {"beta2", num(c.adam.beta2)},
        {"eps", num(c.adam.eps)},
        {"lookahead", b(c.lookahead)},
        {"la_alpha", num(c.lookahead_options.alpha)},
        {"la_k", std::to_string(c.lookahead_options.k)},
        {"schedule", schedule_kind_name(c.schedule)},
        {"warmup_steps", std::to_string(c.warmup_steps)},
        {"end_lr", num(c.end_lr)},
        {"power", num(c.power)},
        {"epochs", std::to_string(c.epochs)},
        {"batch_size", std::to_string(c.batch_size)},
        {"seed", std::to_string(c.seed)},
        {"scheme", scheme_kind_name(c.scheme.kind)},
        {"k", std::to_string(c.scheme.k)},
        {"alpha", num(c.scheme.alpha)},
        {"bn_mode", bn_mode_name(c.effective_bn_mode())},
        {"save_every_steps", std::to_string(c.save_every_steps)},
        {"save_averaged", b(c.save_averaged)},
        {"record_wall_time", b(c.record_wall_time)},
        {"out", c.out.string()},
    };
}

std::string resolved_config_text(const RunConfig& config) {
    std::string text;
    for (const auto& [k, v] : resolved_values(config)) text += k + "=" + v + "\n";
    return text;
}

std::vector<std::string> validate_run_config(const RunConfig& c) {
    if (c.epochs < 1) throw ConfigError("epochs must be at least 1");
    if (c.batch_size < 1) throw ConfigError("batch_size must be at least 1");
    if (c.hidden.empty()) throw ConfigError("at least one hidden layer is required");
    if (!(c.lr >= 0.0)) throw ConfigError("lr must be nonnegative");
    if (c.lookahead) {
        if (!(c.lookahead_options.alpha >= 0.0 && c.lookahead_options.alpha <= 1.0)) {
            throw ConfigError("la_alpha must lie in [0, 1]");
        }
        if (c.lookahead_options.k < 1) throw ConfigError("la_k must be at least 1");
    }
    if (c.bn_mode && *c.bn_mode != BnMode::Off && !c.batch_norm) {
        throw ConfigError(std::string("bn_mode=") + bn_mode_name(*c.bn_mode) +
                          " requires a model with batch-norm layers (batch_norm=true)");
    }
    if (c.data.source == "spirals") {
        if (c.data.n_per_class < 1 || c.data.classes < 2) {
            throw ConfigError("spirals need n_per_class >= 1 and classes >= 2");
        }
    }
    return validate_scheme(c.scheme);
}

}  // namespace lawa
