// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lawa {

enum class DType : std::uint8_t { F32 = 0, F64 = 1 };

const char* dtype_name(DType dtype) noexcept;

using Shape = std::vector<std::uint64_t>;

std::uint64_t element_count(const Shape& shape) noexcept;

/// Dense row-major tensor. Values are held as doubles; an f32 tensor only ever
/// holds values that are exactly representable as float, so narrowing on write
/// is lossless.
class Tensor {
public:
    Tensor() = default;
    Tensor(DType dtype, Shape shape, std::vector<double> values);

    static Tensor zeros(DType dtype, Shape shape);
    static Tensor scalar(double value, DType dtype = DType::F64);

    [[nodiscard]] DType dtype() const noexcept { return dtype_; }
    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Same dtype and shape, new contents (rounded to the dtype).
    [[nodiscard]] Tensor with_values(std::vector<double> values) const;
    [[nodiscard]] Tensor cast(DType dtype) const;

private:
    DType dtype_ = DType::F64;
    Shape shape_{0};
    std::vector<double> values_;
};

struct Entry {
    std::string name;
    Tensor tensor;
};

/// Ordered, uniquely named collection of tensors sharing one element type.
class ParameterSet {
public:
    ParameterSet() = default;
    explicit ParameterSet(std::vector<Entry> entries);

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] const Entry& operator[](std::size_t i) const noexcept { return entries_[i]; }
    [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
    [[nodiscard]] auto end() const noexcept { return entries_.end(); }

    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const noexcept;
    [[nodiscard]] const Tensor& at(std::string_view name) const;

    /// Element type of the entries; f64 for an empty set.
    [[nodiscard]] DType dtype() const noexcept;
    [[nodiscard]] std::uint64_t element_count() const noexcept;

    [[nodiscard]] ParameterSet with_tensor(std::size_t index, Tensor tensor) const;
    [[nodiscard]] ParameterSet cast(DType dtype) const;

    /// Builds a structurally identical set from per-entry value vectors.
    [[nodiscard]] ParameterSet with_values(std::vector<std::vector<double>> values) const;

    friend bool operator==(const ParameterSet& a, const ParameterSet& b);

private:
    std::vector<Entry> entries_;
};

/// Throws StructureMismatch naming the first entry where a and b differ in
/// name, position, shape, or element type.
void require_same_structure(const ParameterSet& a, const ParameterSet& b);
[[nodiscard]] bool same_structure(const ParameterSet& a, const ParameterSet& b) noexcept;

[[nodiscard]] bool all_finite(const ParameterSet& p) noexcept;
/// Throws NonFiniteError naming the first entry holding NaN or Inf.
void require_finite(const ParameterSet& p, std::string_view context);

[[nodiscard]] ParameterSet add_scaled(const ParameterSet& dst, const ParameterSet& src, double c);
[[nodiscard]] ParameterSet scale(const ParameterSet& p, double c);
[[nodiscard]] double l2_distance(const ParameterSet& p, const ParameterSet& q);

struct Checkpoint {
    ParameterSet params;
    std::uint64_t epoch = 0;
    std::uint64_t step = 0;
};

}  // namespace lawa
