// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Test helpers: scratch directories, random parameter sets, and naive oracles
// that deliberately share no code with the library's averaging path.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "param_core/parameter_set.hpp"

namespace lawa_test {

namespace fs = std::filesystem;

/// Fresh, empty directory under the current working directory.
inline fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::current_path() / "scratch" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

/// Fixed two-entry layout used by many tests: w [rows, cols] and b [cols].
inline lawa::ParameterSet make_set(const std::vector<double>& w, const std::vector<double>& b,
                                   std::uint64_t rows, std::uint64_t cols, lawa::DType dtype = lawa::DType::F64) {
    return lawa::ParameterSet({{"w", lawa::Tensor(dtype, {rows, cols}, w)}, {"b", lawa::Tensor(dtype, {cols}, b)}});
}

inline lawa::ParameterSet scalar_set(double v) {
    return lawa::ParameterSet({{"x", lawa::Tensor::scalar(v)}});
}

/// Random set with a random number of entries and shapes, drawn from rng.
struct Layout {
    std::vector<std::string> names;
    std::vector<lawa::Shape> shapes;
};

inline Layout random_layout(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> entries(1, 4), rank(0, 3), dim(1, 5);
    Layout layout;
    const int n = entries(rng);
    for (int i = 0; i < n; ++i) {
        layout.names.push_back("p" + std::to_string(i));
        lawa::Shape s;
        const int r = rank(rng);
        for (int d = 0; d < r; ++d) s.push_back(static_cast<std::uint64_t>(dim(rng)));
        layout.shapes.push_back(s);
    }
    return layout;
}

inline lawa::ParameterSet random_set(const Layout& layout, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<lawa::Entry> entries;
    for (std::size_t i = 0; i < layout.names.size(); ++i) {
        std::vector<double> v(lawa::element_count(layout.shapes[i]));
        for (auto& x : v) x = normal(rng);
        entries.push_back({layout.names[i], lawa::Tensor(lawa::DType::F64, layout.shapes[i], v)});
    }
    return lawa::ParameterSet(std::move(entries));
}

/// Independent mean: per element, plain left-to-right sum then one division.
inline std::vector<std::vector<double>> naive_mean(const std::vector<lawa::ParameterSet>& sets) {
    std::vector<std::vector<double>> out;
    for (std::size_t e = 0; e < sets.front().size(); ++e) {
        const auto n = sets.front()[e].tensor.size();
        std::vector<double> acc(n, 0.0);
        for (const auto& s : sets) {
            for (std::size_t i = 0; i < n; ++i) acc[i] += s[e].tensor[i];
        }
        for (auto& x : acc) x /= static_cast<double>(sets.size());
        out.push_back(std::move(acc));
    }
    return out;
}

/// Largest absolute elementwise difference; structures must match.
inline double max_abs_diff(const lawa::ParameterSet& a, const std::vector<std::vector<double>>& b) {
    double worst = 0.0;
    for (std::size_t e = 0; e < a.size(); ++e) {
        for (std::size_t i = 0; i < a[e].tensor.size(); ++i) {
            worst = std::max(worst, std::abs(a[e].tensor[i] - b[e][i]));
        }
    }
    return worst;
}

inline double max_abs_diff(const lawa::ParameterSet& a, const lawa::ParameterSet& b) {
    std::vector<std::vector<double>> values;
    for (const auto& e : b) values.emplace_back(e.tensor.values().begin(), e.tensor.values().end());
    return max_abs_diff(a, values);
}

/// Largest elementwise |a-b| / max(|a|, |b|, floor).
inline double max_rel_diff(const lawa::ParameterSet& a, const lawa::ParameterSet& b, double floor = 1e-300) {
    double worst = 0.0;
    for (std::size_t e = 0; e < a.size(); ++e) {
        for (std::size_t i = 0; i < a[e].tensor.size(); ++i) {
            const double x = a[e].tensor[i], y = b[e].tensor[i];
            const double d = std::max({std::abs(x), std::abs(y), floor});
            worst = std::max(worst, std::abs(x - y) / d);
        }
    }
    return worst;
}

/// Minimal CSV reader for metrics files: header names -> column of raw cells.
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw std::runtime_error("no column " + name);
    }
    [[nodiscard]] std::string cell(std::size_t row, const std::string& name) const { return rows[row][col(name)]; }
    [[nodiscard]] double num(std::size_t row, const std::string& name) const { return std::stod(cell(row, name)); }
};

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline Csv read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Csv csv;
    std::string line;
    std::getline(in, line);
    csv.header = split_commas(line);
    while (std::getline(in, line)) {
        if (!line.empty()) csv.rows.push_back(split_commas(line));
    }
    return csv;
}

}  // namespace lawa_test
