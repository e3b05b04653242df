// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "avg/checkpoint_ring.hpp"

#include <string>

#include "param_core/errors.hpp"

namespace lawa {

CheckpointRing::CheckpointRing(std::size_t capacity) : slots_(capacity) {
    if (capacity == 0) throw ConfigError("checkpoint ring capacity must be at least 1");
}

void CheckpointRing::push(Checkpoint c) {
    if (count_ > 0 && c.epoch <= newest().epoch) {
        throw EpochOrderError("checkpoint epoch " + std::to_string(c.epoch) +
                              " does not follow newest stored epoch " + std::to_string(newest().epoch));
    }
    if (count_ < slots_.size()) {
        slots_[(head_ + count_) % slots_.size()] = std::move(c);
        ++count_;
    } else {
        slots_[head_] = std::move(c);
        head_ = (head_ + 1) % slots_.size();
    }
}

const Checkpoint& CheckpointRing::at(std::size_t i) const {
    if (i >= count_) {
        throw InternalStateError("ring index " + std::to_string(i) + " out of range (size " +
                                 std::to_string(count_) + ")");
    }
    return *slots_[(head_ + i) % slots_.size()];
}

const Checkpoint& CheckpointRing::newest() const {
    if (count_ == 0) throw InternalStateError("checkpoint ring is empty");
    return at(count_ - 1);
}

std::vector<const Checkpoint*> CheckpointRing::contents() const {
    std::vector<const Checkpoint*> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) out.push_back(&at(i));
    return out;
}

}  // namespace lawa
