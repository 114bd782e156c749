#pragma once

#include <string>

#include "eie/csc.hpp"
#include "eie/sim.hpp"

namespace eie {

// JSON documents with alphabetical key order and shortest-roundtrip float
// formatting, so reports diff cleanly and golden files are byte-stable.
std::string storage_stats_to_json(const StorageStats& st);
std::string sim_report_to_json(const SimReport& rep);

struct CompressStats {
    std::string policy;
    double density_requested = 0.0;
    uint64_t kept = 0;
    uint32_t num_pes = 1;
    double sse = 0.0;
    StorageStats storage;
};

std::string compress_stats_to_json(const CompressStats& st);

} // namespace eie
