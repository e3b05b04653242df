// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "engine/train.hpp"

namespace lawa {

// Flat key=value configuration. Keys match the long command-line flags with
// dashes replaced by underscores (e.g. --save-every-steps -> save_every_steps).

/// Every configurable key, in the order config.resolved lists them.
const std::vector<std::string>& config_keys();

/// Throws ConfigError for unknown keys or malformed values.
void apply_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Parses "key = value" lines; blank lines and lines starting with '#' are ignored.
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Every effective parameter, one per line, in config_keys() order.
std::vector<std::pair<std::string, std::string>> resolved_values(const RunConfig& config);
std::string resolved_config_text(const RunConfig& config);

/// Validates the whole run configuration up front; returns non-fatal warnings.
std::vector<std::string> validate_run_config(const RunConfig& config);

}  // namespace lawa
