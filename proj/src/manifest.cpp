#include "gadepth/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gadepth/dataset.hpp"

namespace gadepth {

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file for hashing: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buffer))) break;
    }
    return hash;
}

void RunManifest::write_atomic(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["inputs"] = input_hashes;
    j["seed"] = seed;
    j["version"] = version;
    if (wall_seconds >= 0.0) j["wall_seconds"] = wall_seconds;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write manifest: " + tmp);
        out << j.dump(2) << "\n";
        if (!out) throw std::runtime_error("manifest write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::json load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
    }
    // a manifest doubles as a config file: use its embedded echo
    if (j.contains("config") && j["config"].is_object()) return j["config"];
    return j;
}

}  // namespace gadepth
