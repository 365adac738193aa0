#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace metldpc {

inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility record written next to every CLI output. Two runs whose
// manifests agree on everything but the timestamp produce identical files.
struct RunManifest {
    std::string subcommand;
    nlohmann::json params = nlohmann::json::object();
    std::map<std::string, std::string> input_hashes;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string timestamp;

    nlohmann::json to_json() const;
};

std::string file_hash_hex(const std::string& path);  // FNV-1a 64 of the bytes
std::string utc_timestamp();
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace metldpc
