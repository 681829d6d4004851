#pragma once

// Run manifests: every command that writes data files drops a manifest.json
// beside them recording tool version, the canonical configuration and its
// hash, digests of input files, the RNG algorithm, and the seed. Two runs
// whose manifests agree (timestamps aside) produce byte-identical outputs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sbcool {

inline constexpr const char* tool_version = "0.3.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t v);
std::string file_digest(const std::filesystem::path& file);  // fnv1a64 of contents

struct RunManifest {
    std::string version = tool_version;
    std::string command;                 // subcommand with canonical options
    std::string config;                  // canonical configuration string
    std::string config_hash;             // fnv1a64 hex of config
    std::map<std::string, std::string> input_digests;
    std::string rng_algorithm;
    std::uint64_t seed = 0;
    std::string created_utc;             // informational; excluded from identity

    std::string to_json() const;
    void write(const std::filesystem::path& file) const;
};

RunManifest make_manifest(const std::string& command, const std::string& config,
                          std::uint64_t seed,
                          const std::vector<std::filesystem::path>& inputs);

}  // namespace sbcool
