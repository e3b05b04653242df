// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "param_core/parameter_set.hpp"

namespace lawa {

/// Fixed-capacity circular queue holding the most recently pushed checkpoints.
/// Pushing into a full ring overwrites the oldest slot in O(1).
class CheckpointRing {
public:
    explicit CheckpointRing(std::size_t capacity);

    /// Appends c, evicting the oldest slot when full. Epochs must strictly increase.
    void push(Checkpoint c);

    [[nodiscard]] std::size_t capacity() const noexcept { return slots_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
    [[nodiscard]] bool full() const noexcept { return count_ == slots_.size(); }

    /// i = 0 is the oldest stored checkpoint.
    [[nodiscard]] const Checkpoint& at(std::size_t i) const;
    [[nodiscard]] const Checkpoint& newest() const;
    [[nodiscard]] const Checkpoint& oldest() const { return at(0); }

    /// Stored checkpoints, oldest first.
    [[nodiscard]] std::vector<const Checkpoint*> contents() const;

private:
    std::vector<std::optional<Checkpoint>> slots_;
    std::size_t head_ = 0;  // index of the oldest slot
    std::size_t count_ = 0;
};

}  // namespace lawa
