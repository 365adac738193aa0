#include "metldpc/manifest.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "metldpc/errors.hpp"

namespace metldpc {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["params"] = params;
    j["inputs"] = input_hashes;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["timestamp"] = timestamp;
    return j;
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash missing file: " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << manifest.to_json().dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace metldpc
