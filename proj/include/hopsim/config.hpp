#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hopsim/system_config.hpp"

namespace hopsim {

// Parses a flat key=value file ('#' comments, blank lines allowed) on top of
// the built-in defaults, then applies key=value overrides in order (later
// wins) and validates. Unknown keys are ConfigErrors. An empty path skips
// the file and yields defaults + overrides.
SystemConfig parse_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

// Applies a single "key=value" assignment. Throws ConfigError for unknown
// keys or malformed values.
void apply_override(SystemConfig& config, const std::string& assignment);

} // namespace hopsim
