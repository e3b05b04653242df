// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "param_core/parameter_set.hpp"

namespace lawa {

// On-disk layout, little-endian throughout:
//   "LAWA" | u32 version=1 | u64 epoch | u64 step | u32 tensor_count
//   per tensor: u32 name_len | name bytes | u8 dtype | u32 rank | rank x u64 dims | raw data
// Nothing may follow the last tensor.
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace lawa
