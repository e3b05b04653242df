// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "data/rng.hpp"
#include "param_core/errors.hpp"

namespace lawa {

namespace {

// Rounds to nearest, so each class keeps its share within one sample.
std::size_t train_share(std::size_t n) { return n - (n + 2) / 5; }

void sort_split(Dataset& d) {
    std::sort(d.train.begin(), d.train.end());
    std::sort(d.val.begin(), d.val.end());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Batch Dataset::gather(std::span<const std::size_t> indices) const {
    Batch b;
    b.rows = indices.size();
    b.cols = dims;
    b.features.resize(b.rows * dims);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        std::copy_n(features.begin() + static_cast<std::ptrdiff_t>(indices[r] * dims), dims,
                    b.features.begin() + static_cast<std::ptrdiff_t>(r * dims));
    }
    if (task == TaskKind::Classification) {
        b.labels.reserve(b.rows);
        for (auto i : indices) b.labels.push_back(labels[i]);
    } else {
        b.targets.reserve(b.rows);
        for (auto i : indices) b.targets.push_back(targets[i]);
    }
    return b;
}

void standardize(Dataset& data) {
    if (data.train.empty()) return;
    const double n = static_cast<double>(data.train.size());
    for (std::size_t d = 0; d < data.dims; ++d) {
        double mean = 0.0;
        for (auto i : data.train) mean += data.features[i * data.dims + d];
        mean /= n;
        double var = 0.0;
        for (auto i : data.train) {
            const double x = data.features[i * data.dims + d] - mean;
            var += x * x;
        }
        var /= n;
        const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
        for (std::size_t r = 0; r < data.rows; ++r) {
            auto& x = data.features[r * data.dims + d];
            x = (x - mean) / sd;
        }
    }
}

Dataset make_spirals(std::uint64_t seed, std::size_t n_per_class, std::size_t classes, double noise) {
    if (n_per_class < 1) throw ConfigError("spirals need at least one point per class");
    if (classes < 2) throw ConfigError("spirals need at least two classes");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("spiral noise must be finite and >= 0");

    constexpr double kTurn = 4.0;  // radians swept by each arm
    Dataset d;
    d.rows = n_per_class * classes;
    d.dims = 2;
    d.task = TaskKind::Classification;
    d.classes = classes;
    d.features.resize(d.rows * 2);
    d.labels.resize(d.rows);

    CounterRng jitter(seed, "spirals.noise");
    CounterRng split(seed, "spirals.split");
    for (std::size_t c = 0; c < classes; ++c) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(classes);
        std::vector<std::size_t> members;
        members.reserve(n_per_class);
        for (std::size_t i = 0; i < n_per_class; ++i) {
            const std::size_t row = c * n_per_class + i;
            const double r = static_cast<double>(i + 1) / static_cast<double>(n_per_class);
            const double t = phase + kTurn * r;
            // Gaussian jitter on the coordinates, one draw per axis.
            const double dx = jitter.normal();
            const double dy = jitter.normal();
            d.features[2 * row] = r * std::sin(t) + noise * dx;
            d.features[2 * row + 1] = r * std::cos(t) + noise * dy;
            d.labels[row] = static_cast<std::int32_t>(c);
            members.push_back(row);
        }
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[split.below(i)]);
        }
        const auto n_train = train_share(members.size());
        d.train.insert(d.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
        d.val.insert(d.val.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
    }
    sort_split(d);
    standardize(d);
    return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path.string() + "' is empty; a header row is required");
    const auto header = split_fields(line);
    const auto label_it = std::find(header.begin(), header.end(), std::string_view(label_column));
    if (label_it == header.end()) {
        throw SchemaError("label column '" + label_column + "' not found in '" + path.string() + "'");
    }
    const auto label_col = static_cast<std::size_t>(label_it - header.begin());

    Dataset d;
    d.dims = header.size() - 1;
    std::vector<double> raw_labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, std::min(fields.size(), header.size()) + 1,
                             "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double value = 0.0;
            const auto f = fields[c];
            const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
            if (f.empty() || ec != std::errc() || end != f.data() + f.size() || !std::isfinite(value)) {
                throw ParseError(line_no, c + 1, "non-numeric cell '" + std::string(f) + "'");
            }
            if (c == label_col) {
                raw_labels.push_back(value);
            } else {
                d.features.push_back(value);
            }
        }
    }
    d.rows = raw_labels.size();
    if (d.rows == 0) throw EmptyDataError("'" + path.string() + "' has no data rows");

    const bool integral = std::all_of(raw_labels.begin(), raw_labels.end(), [](double v) {
        return v >= 0.0 && v < 1e6 && v == std::floor(v);
    });
    if (integral) {
        d.task = TaskKind::Classification;
        d.labels.reserve(d.rows);
        for (double v : raw_labels) d.labels.push_back(static_cast<std::int32_t>(v));
        d.classes = static_cast<std::size_t>(*std::max_element(d.labels.begin(), d.labels.end())) + 1;
    } else {
        d.task = TaskKind::Regression;
        d.targets = std::move(raw_labels);
    }

    std::vector<std::size_t> order(d.rows);
    for (std::size_t i = 0; i < d.rows; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [](std::size_t a, std::size_t b) {
        const auto ha = splitmix64(a ^ 0x5EEDC5F00DULL);
        const auto hb = splitmix64(b ^ 0x5EEDC5F00DULL);
        return ha != hb ? ha < hb : a < b;
    });
    const auto n_train = train_share(d.rows);
    d.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    d.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    sort_split(d);
    standardize(d);
    return d;
}

}  // namespace lawa
