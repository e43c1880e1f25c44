#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace gadepth {

// 64-bit FNV-1a over a file's bytes; used to pin run inputs and to compare
// outputs for reproducibility.
std::uint64_t fnv1a_file(const std::string& path);

// Run provenance: command, full configuration echo, input hashes, timings.
// Re-running a command with --config <manifest> reproduces its outputs.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::map<std::string, std::string> input_hashes;  // path -> hex hash
    std::uint64_t seed = 0;
    std::string version;
    double wall_seconds = -1.0;  // negative until the run finishes

    // writes to a temporary file in the same directory, then renames
    void write_atomic(const std::string& path) const;
};

nlohmann::json load_config_json(const std::string& path);

}  // namespace gadepth
