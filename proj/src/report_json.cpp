#include "eie/report_json.hpp"

#include <json.hpp>

namespace eie {

namespace {

nlohmann::json storage_json(const StorageStats& st) {
    return nlohmann::json{
        {"codebook_bits", st.codebook_bits},
        {"compression_ratio", st.compression_ratio},
        {"dense_bits", st.dense_bits},
        {"index_bits", st.index_bits},
        {"index_overhead_fraction", st.index_overhead_fraction},
        {"offset_bits", st.offset_bits},
        {"total_bits", st.total_bits},
        {"weight_bits", st.weight_bits},
    };
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string storage_stats_to_json(const StorageStats& st) { return dump(storage_json(st)); }

std::string sim_report_to_json(const SimReport& rep) {
    nlohmann::json j{
        {"broadcast_stall_cycles", rep.broadcast_stall_cycles},
        {"dense_cycles", rep.dense_cycles},
        {"energy_proxy", rep.energy_proxy},
        {"load_imbalance", rep.load_imbalance},
        {"nnz_activations", rep.nnz_activations},
        {"per_pe_idle_cycles", rep.per_pe_idle_cycles},
        {"per_pe_macs", rep.per_pe_macs},
        {"speedup", rep.speedup},
        {"storage", storage_json(rep.storage)},
        {"total_cycles", rep.total_cycles},
    };
    return dump(j);
}

std::string compress_stats_to_json(const CompressStats& st) {
    nlohmann::json j{
        {"density_requested", st.density_requested},
        {"kept", st.kept},
        {"num_pes", st.num_pes},
        {"policy", st.policy},
        {"sse", st.sse},
        {"storage", storage_json(st.storage)},
    };
    return dump(j);
}

} // namespace eie
