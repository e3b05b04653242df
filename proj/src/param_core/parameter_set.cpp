// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "param_core/parameter_set.hpp"

#include <bit>
#include <cmath>
#include <unordered_set>

#include "param_core/errors.hpp"

namespace lawa {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::StructureMismatch: return "StructureMismatch";
        case ErrorCode::NonFinite: return "NonFiniteError";
        case ErrorCode::NonFiniteGrad: return "NonFiniteGradError";
        case ErrorCode::Io: return "IoError";
        case ErrorCode::Format: return "FormatError";
        case ErrorCode::EpochOrder: return "EpochOrderError";
        case ErrorCode::InternalState: return "InternalStateError";
        case ErrorCode::Config: return "ConfigError";
        case ErrorCode::Shape: return "ShapeError";
        case ErrorCode::EmptyData: return "EmptyDataError";
        case ErrorCode::Schema: return "SchemaError";
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::InsufficientCheckpoints: return "InsufficientCheckpoints";
        case ErrorCode::Usage: return "UsageError";
    }
    return "UnknownError";
}

const char* dtype_name(DType dtype) noexcept { return dtype == DType::F32 ? "f32" : "f64"; }

std::uint64_t element_count(const Shape& shape) noexcept {
    std::uint64_t n = 1;
    for (auto d : shape) n *= d;
    return n;
}

namespace {

void round_to(DType dtype, std::vector<double>& values) {
    if (dtype == DType::F32) {
        for (auto& v : values) v = static_cast<double>(static_cast<float>(v));
    }
}

std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

}  // namespace

Tensor::Tensor(DType dtype, Shape shape, std::vector<double> values)
    : dtype_(dtype), shape_(std::move(shape)), values_(std::move(values)) {
    if (element_count(shape_) != values_.size()) {
        throw ShapeError("tensor of shape " + shape_string(shape_) + " cannot hold " +
                         std::to_string(values_.size()) + " values");
    }
    round_to(dtype_, values_);
}

Tensor Tensor::zeros(DType dtype, Shape shape) {
    const auto n = element_count(shape);
    return Tensor(dtype, std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::scalar(double value, DType dtype) { return Tensor(dtype, Shape{1}, {value}); }

Tensor Tensor::with_values(std::vector<double> values) const {
    return Tensor(dtype_, shape_, std::move(values));
}

Tensor Tensor::cast(DType dtype) const { return Tensor(dtype, shape_, values_); }

ParameterSet::ParameterSet(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::unordered_set<std::string_view> seen;
    for (const auto& e : entries_) {
        if (e.name.empty()) throw StructureMismatch("parameter set entries need nonempty names");
        if (!seen.insert(e.name).second) {
            throw StructureMismatch("duplicate parameter name '" + e.name + "'");
        }
        if (e.tensor.dtype() != entries_.front().tensor.dtype()) {
            throw StructureMismatch("entry '" + e.name + "' is " + dtype_name(e.tensor.dtype()) +
                                    " but the set is " + dtype_name(entries_.front().tensor.dtype()));
        }
    }
}

std::optional<std::size_t> ParameterSet::index_of(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name == name) return i;
    }
    return std::nullopt;
}

const Tensor& ParameterSet::at(std::string_view name) const {
    auto i = index_of(name);
    if (!i) throw StructureMismatch("no entry named '" + std::string(name) + "'");
    return entries_[*i].tensor;
}

DType ParameterSet::dtype() const noexcept {
    return entries_.empty() ? DType::F64 : entries_.front().tensor.dtype();
}

std::uint64_t ParameterSet::element_count() const noexcept {
    std::uint64_t n = 0;
    for (const auto& e : entries_) n += e.tensor.size();
    return n;
}

ParameterSet ParameterSet::with_tensor(std::size_t index, Tensor tensor) const {
    auto entries = entries_;
    entries.at(index).tensor = std::move(tensor);
    return ParameterSet(std::move(entries));
}

ParameterSet ParameterSet::cast(DType dtype) const {
    auto entries = entries_;
    for (auto& e : entries) e.tensor = e.tensor.cast(dtype);
    return ParameterSet(std::move(entries));
}

ParameterSet ParameterSet::with_values(std::vector<std::vector<double>> values) const {
    if (values.size() != entries_.size()) {
        throw StructureMismatch("expected " + std::to_string(entries_.size()) + " value blocks, got " +
                                std::to_string(values.size()));
    }
    auto entries = entries_;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].tensor = entries[i].tensor.with_values(std::move(values[i]));
    }
    return ParameterSet(std::move(entries));
}

bool operator==(const ParameterSet& a, const ParameterSet& b) {
    if (!same_structure(a, b)) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto x = a[i].tensor.values();
        auto y = b[i].tensor.values();
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (std::bit_cast<std::uint64_t>(x[j]) != std::bit_cast<std::uint64_t>(y[j])) return false;
        }
    }
    return true;
}

namespace {

std::optional<std::string> first_mismatch(const ParameterSet& a, const ParameterSet& b) {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.name != y.name) {
            return "entry " + std::to_string(i) + ": name '" + x.name + "' vs '" + y.name + "'";
        }
        if (x.tensor.shape() != y.tensor.shape()) {
            return "entry '" + x.name + "': shape " + shape_string(x.tensor.shape()) + " vs " +
                   shape_string(y.tensor.shape());
        }
        if (x.tensor.dtype() != y.tensor.dtype()) {
            return "entry '" + x.name + "': dtype " + dtype_name(x.tensor.dtype()) + " vs " +
                   dtype_name(y.tensor.dtype());
        }
    }
    if (a.size() != b.size()) {
        const auto& extra = a.size() > b.size() ? a[n] : b[n];
        return "entry '" + extra.name + "' present in only one set (" + std::to_string(a.size()) +
               " vs " + std::to_string(b.size()) + " entries)";
    }
    return std::nullopt;
}

}  // namespace

bool same_structure(const ParameterSet& a, const ParameterSet& b) noexcept {
    try {
        return !first_mismatch(a, b).has_value();
    } catch (...) {
        return false;
    }
}

void require_same_structure(const ParameterSet& a, const ParameterSet& b) {
    if (auto why = first_mismatch(a, b)) throw StructureMismatch("structure mismatch at " + *why);
}

bool all_finite(const ParameterSet& p) noexcept {
    for (const auto& e : p) {
        for (double v : e.tensor.values()) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

void require_finite(const ParameterSet& p, std::string_view context) {
    for (const auto& e : p) {
        const auto values = e.tensor.values();
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (!std::isfinite(values[j])) {
                throw NonFiniteError(std::string(context) + ": entry '" + e.name + "' element " +
                                     std::to_string(j) + " is not finite");
            }
        }
    }
}

ParameterSet add_scaled(const ParameterSet& dst, const ParameterSet& src, double c) {
    require_same_structure(dst, src);
    std::vector<std::vector<double>> out(dst.size());
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const auto a = dst[i].tensor.values();
        const auto b = src[i].tensor.values();
        out[i].resize(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = a[j] + c * b[j];
    }
    return dst.with_values(std::move(out));
}

ParameterSet scale(const ParameterSet& p, double c) {
    std::vector<std::vector<double>> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto a = p[i].tensor.values();
        out[i].resize(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = c * a[j];
    }
    return p.with_values(std::move(out));
}

double l2_distance(const ParameterSet& p, const ParameterSet& q) {
    require_same_structure(p, q);
    // Scaled accumulation keeps huge or tiny differences from overflowing.
    double scale_max = 0.0;
    double sum = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto a = p[i].tensor.values();
        const auto b = q[i].tensor.values();
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double d = std::abs(a[j] - b[j]);
            if (d == 0.0) continue;
            if (d > scale_max) {
                const double r = scale_max / d;
                sum = 1.0 + sum * r * r;
                scale_max = d;
            } else {
                const double r = d / scale_max;
                sum += r * r;
            }
        }
    }
    return scale_max == 0.0 ? 0.0 : scale_max * std::sqrt(sum);
}

}  // namespace lawa
