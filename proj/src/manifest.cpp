#include "eie/manifest.hpp"

#include <json.hpp>

#include "eie/io_util.hpp"

namespace eie {

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string RunManifest::to_json() const {
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [path, digest_hex] : outputs)
        outs.push_back({{"digest", digest_hex}, {"path", path}});
    nlohmann::json j{
        {"command", command},
        {"config", nlohmann::json::parse(config_json.empty() ? "{}" : config_json)},
        {"digest", digest},
        {"inputs", inputs},
        {"outputs", outs},
        {"seed", seed},
        {"tool_version", kToolVersion},
    };
    return j.dump(2) + "\n";
}

void write_manifest_for(const std::string& command, const std::vector<std::string>& inputs,
                        uint64_t seed, const std::string& config_json,
                        const std::vector<std::string>& output_paths) {
    RunManifest man;
    man.command = command;
    man.inputs = inputs;
    man.seed = seed;
    man.config_json = config_json;

    std::string all_bytes;
    for (const std::string& path : output_paths) {
        const std::string bytes = read_file_bytes(path);
        man.outputs.emplace_back(path, fnv1a64_hex(bytes));
        all_bytes += bytes;
    }
    man.digest = fnv1a64_hex(all_bytes);

    write_file_atomic(output_paths.front() + ".manifest.json", man.to_json());
}

} // namespace eie
