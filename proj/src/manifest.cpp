#include "sbcool/manifest.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sbcool/errors.hpp"
#include "sbcool/rng.hpp"

namespace sbcool {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xF];
    return s;
}

std::string file_digest(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot read file for digest: " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return to_hex(fnv1a64(ss.str()));
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = version;
    j["command"] = command;
    j["config"] = config;
    j["config_hash"] = config_hash;
    j["input_digests"] = input_digests;
    j["rng_algorithm"] = rng_algorithm;
    j["seed"] = seed;
    j["created_utc"] = created_utc;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + file.string());
    out << to_json();
    if (!out) throw DataError("write failed: " + file.string());
}

RunManifest make_manifest(const std::string& command, const std::string& config,
                          std::uint64_t seed,
                          const std::vector<std::filesystem::path>& inputs) {
    RunManifest m;
    m.command = command;
    m.config = config;
    m.config_hash = to_hex(fnv1a64(config));
    m.rng_algorithm = rng::algorithm_id;
    m.seed = seed;
    for (const auto& path : inputs) m.input_digests[path.filename().string()] = file_digest(path);

    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    m.created_utc = buf;
    return m;
}

}  // namespace sbcool
