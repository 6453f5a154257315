#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hopsim/system_config.hpp"

namespace hopsim {

// Reproducibility record written beside every command's outputs: the fully
// resolved configuration, the seed, the command line, and a checksum per
// emitted file. Re-running from the embedded config and seed reproduces the
// same checksums.
struct RunManifest {
    std::string tool;
    std::string version;
    std::string command_line;
    std::uint64_t master_seed = 0;
    std::map<std::string, std::string> config; // resolved key -> value
    std::string started_at;
    std::string finished_at;

    struct Output {
        std::string file;     // name relative to the manifest
        std::string checksum; // fnv1a64 hex
    };
    std::vector<Output> outputs;

    void write(const std::filesystem::path& path) const;
    static RunManifest load(const std::filesystem::path& path);
};

// Key/value view of a config, using the config-file key names; the inverse
// of parse_config's overlay.
std::map<std::string, std::string> config_to_kv(const SystemConfig& config);

std::string iso8601_now();

} // namespace hopsim
