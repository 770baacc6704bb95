#include "fracmin/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "fracmin/errors.hpp"

namespace fracmin {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file '" + path + "' for hashing");
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64_hex(buf.str());
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"command", command},
                          {"config_hash", config_hash},
                          {"seed", seed},
                          {"grid", grid},
                          {"spec", spec},
                          {"outputs", outputs},
                          {"output_hashes", output_hashes},
                          {"started_at", started_at},
                          {"finished_at", finished_at},
                          {"artifact_version", artifact_version}};
}

void write_manifest(const RunManifest& manifest, const std::string& dir) {
    const std::string path = dir + "/manifest.json";
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest to '" + path + "'");
    out << manifest.to_json().dump(2) << "\n";
}

}  // namespace fracmin
