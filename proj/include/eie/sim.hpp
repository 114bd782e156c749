#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eie/csc.hpp"
#include "eie/matrix.hpp"

namespace eie {

// Per-event energy weights for the counter-based proxy. Defaults are all ones;
// no claim is made about real per-event energies.
struct CostTable {
    double mac = 1.0;
    double weight_read = 1.0;
    double index_read = 1.0;
    double offset_read = 1.0;
    double act_read = 1.0;
    double act_write = 1.0;
};

struct SimConfig {
    uint16_t num_pes = 1; // must match the model
    uint32_t fifo_depth = 8;
    bool apply_relu = false;
    // Fillers are consumed during entry fetch for free by default; with this
    // flag each filler occupies the PE's one execution slot for a cycle, so
    // the CSC traversal overhead becomes visible in cycle counts.
    bool fillers_cost_cycle = false;
    CostTable cost_table;
};

// Raw event counts feeding the energy proxy.
struct EventCounts {
    uint64_t macs = 0;
    uint64_t columns_visited = 0; // per PE per nonzero activation
    uint64_t nnz_activations = 0;
    uint64_t outputs = 0;
};

struct SimReport {
    uint64_t total_cycles = 0;
    std::vector<uint64_t> per_pe_macs;
    std::vector<uint64_t> per_pe_idle_cycles;
    uint64_t broadcast_stall_cycles = 0;
    uint64_t nnz_activations = 0;
    double load_imbalance = 1.0; // max per-PE MACs / mean per-PE MACs
    StorageStats storage;
    double energy_proxy = 0.0;
    uint64_t dense_cycles = 0;
    double speedup = 0.0; // dense_cycles / total_cycles; 0 when nothing ran
};

// Leading-nonzero detection: the (index, value) pairs that get broadcast.
std::vector<std::pair<uint32_t, Fixed16>> lnzd_scan(const ActivationVector& x);

// Cycle budget of a dense accelerator with the same PE count at 1 MAC/PE/cycle.
uint64_t dense_cycle_model(uint32_t rows, uint32_t cols, uint32_t num_pes);

double energy_proxy(const EventCounts& counts, const CostTable& costs);

// Cycle-approximate simulation of the PE array. Each cycle the broadcast unit
// pushes the next nonzero activation to every PE FIFO (if all have space;
// otherwise it stalls), and each PE with visible work executes exactly one MAC
// on its share of the activation's column. Pushes become visible one cycle
// after broadcast. Output is bit-identical to gemv_dense_oracle on the decoded
// matrix.
std::pair<ActivationVector, SimReport> simulate_spmv(const CompressedModel& m,
                                                     const ActivationVector& x,
                                                     const SimConfig& cfg);

} // namespace eie
