#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eie/compress.hpp"
#include "eie/sim.hpp"

namespace eie {

enum class PrunePolicy { Magnitude, Balanced, StructuredNM };

PrunePolicy parse_policy(const std::string& name); // "magnitude" | "balanced" | "nm"

struct SweepConfig {
    PrunePolicy policy = PrunePolicy::Magnitude;
    uint32_t nm_keep = 2;
    uint32_t nm_group = 4;
    uint32_t num_pes = 1;
    int frac_bits = kDefaultFracBits;
    int kmeans_max_iter = 50;
    uint64_t seed = 0;
    uint32_t fifo_depth = 8;
    bool apply_relu = false;
    bool fillers_cost_cycle = false;
    CostTable cost_table;
    bool parallel = true; // sweep points are independent; rows merge in input order
};

struct SweepRow {
    double density = 0.0;
    uint64_t sparse_cycles = 0;
    uint64_t dense_cycles = 0;
    double speedup = 0.0;
    double compression_ratio = 0.0;
    double load_imbalance = 0.0;
    double energy_proxy = 0.0;

    bool operator==(const SweepRow&) const = default;
};

inline constexpr const char* kSweepCsvHeader =
    "density,sparse_cycles,dense_cycles,speedup,compression_ratio,load_imbalance,energy_proxy";

// Applies the pruning policy for one requested density (N:M ignores the
// density knob; its density is fixed at n/m).
PruneMask prune_with_policy(const DenseMatrix& w, const SweepConfig& cfg, double density);

// One compress -> encode -> simulate run per density against a fixed dense
// random activation vector derived from the seed. Deterministic given
// (matrix, densities, config).
std::vector<SweepRow> density_sweep(const DenseMatrix& w, const std::vector<double>& densities,
                                    const SweepConfig& cfg);

// The activation vector the sweep broadcasts: dense (no zero entries), raw
// magnitudes in [64, 511], generated portably from the seed.
ActivationVector sweep_activations(uint32_t cols, uint64_t seed);

// Shortest-roundtrip decimal formatting, shared by CSV and JSON emitters so
// golden files stay byte-stable.
std::string format_double(double v);

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows);

} // namespace eie
