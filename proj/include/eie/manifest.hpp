#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace eie {

inline constexpr const char* kToolVersion = "0.1.0";

uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Reproducibility record written alongside every command's outputs. The
// digest is a stable hash over all output bytes, so two runs with the same
// inputs, flags, and seed can be compared by digest alone.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    uint64_t seed = 0;
    std::string config_json; // flag echo, already serialized
    std::vector<std::pair<std::string, std::string>> outputs; // (path, digest)
    std::string digest; // over all output files' bytes, in listed order

    std::string to_json() const;
};

// Computes per-file and combined digests from the written files, then emits
// "<primary_output>.manifest.json".
void write_manifest_for(const std::string& command, const std::vector<std::string>& inputs,
                        uint64_t seed, const std::string& config_json,
                        const std::vector<std::string>& output_paths);

} // namespace eie
