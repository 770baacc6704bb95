#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fracmin {

// 64-bit FNV-1a, the hash for config and output fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
std::string hash_file(const std::string& path);  // hex digest of the raw bytes

// One manifest per output directory, describing a completed run: the exact
// inputs (command, canonical config and its hash, seed, grid, nonlinearity)
// and every emitted file with its content hash.  Rerunning with the same
// inputs reproduces every listed file bit-for-bit; only the manifest itself
// differs (timestamps), which is why it carries, rather than has, a hash.
struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    nlohmann::json grid;
    nlohmann::json spec;
    std::vector<std::string> outputs;                   // file names in the directory
    std::map<std::string, std::string> output_hashes;   // name -> hex digest
    std::string started_at;   // ISO 8601 UTC
    std::string finished_at;
    std::string artifact_version = "1.0.0";

    nlohmann::json to_json() const;
};

std::string utc_timestamp();

// Serializes dir/manifest.json (the single manifest of that directory).
void write_manifest(const RunManifest& manifest, const std::string& dir);

}  // namespace fracmin
