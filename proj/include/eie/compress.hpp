#pragma once

#include <cstdint>
#include <vector>

#include "eie/fixed_point.hpp"
#include "eie/matrix.hpp"

namespace eie {

// Row-major keep/drop mask produced by one of the pruning policies.
struct PruneMask {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> keep; // 1 = kept, row-major

    size_t popcount() const;
    double density() const;

    bool operator==(const PruneMask&) const = default;
};

// Shared table of 16-bit weight values; stored weights are 4-bit indices into
// it. Entry 0 is pinned to exact zero so pruned elements and CSC filler
// entries decode to nothing. centroids[1..] are the learned values, strictly
// increasing by raw; logical size is at most 2^n_bits.
struct Codebook {
    int n_bits = 4;
    std::vector<Fixed16> centroids{Fixed16{0}};

    size_t size() const { return centroids.size(); }

    bool operator==(const Codebook&) const = default;
};

struct QuantizedMatrix {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> idx; // row-major 4-bit codebook indices
    Codebook codebook;

    Fixed16 decode(size_t e) const { return codebook.centroids[idx[e]]; }
    Fixed16 decode(uint32_t r, uint32_t c) const { return decode(size_t(r) * cols + c); }

    bool operator==(const QuantizedMatrix&) const = default;
};

// Keeps exactly round(density * rows * cols) elements of largest magnitude.
// Ties go to the smaller row-major index.
PruneMask prune_magnitude(const DenseMatrix& w, double density);

// Rows are bucketed by PE assignment (row r -> PE r mod num_pes); each bucket
// keeps its own top round(density * bucket_elements) elements, so no PE
// starves on skewed matrices.
PruneMask prune_load_balanced(const DenseMatrix& w, double density, uint32_t num_pes);

// N:M structured sparsity: exactly n_keep survivors in every contiguous group
// of m_group elements along a row. cols must be divisible by m_group.
PruneMask prune_structured_nm(const DenseMatrix& w, uint32_t n_keep, uint32_t m_group);

struct KmeansConfig {
    int n_bits = 4;       // codebook index width; k = 2^n_bits - 1 learned clusters
    int max_iter = 50;
    uint64_t seed = 0;    // feeds init jitter only; default run is RNG-free
    double init_jitter = 0.0; // fraction of the value range added to initial centroids
    int frac_bits = kDefaultFracBits;
};

// Per-iteration record of the Lloyd run, for convergence monitoring.
struct KmeansTrace {
    std::vector<double> sse_per_iter; // float-domain SSE after each assignment step
    uint32_t iterations = 0;
    bool converged = false;
};

// 1-D k-means over the kept nonzero weight values. Pruned elements and kept
// exact zeros map to index 0. Centroids start evenly spaced between min and
// max, Lloyd runs to assignment fixpoint or max_iter, empty clusters are
// dropped at finalization, and final centroids are quantized to Fixed16 then
// deduplicated and sorted. When the kept values have at most k distinct
// values the codebook is just those values (zero clustering error).
QuantizedMatrix kmeans_codebook(const DenseMatrix& w, const PruneMask& mask,
                                const KmeansConfig& cfg, KmeansTrace* trace = nullptr);

// Sum over kept elements of (w - decoded value)^2.
double quantization_sse(const DenseMatrix& w, const PruneMask& mask,
                        const QuantizedMatrix& qm, int frac_bits = kDefaultFracBits);

// Assignment kernel of the Lloyd loop: nearest centroid per value, ties to the
// lower index. Each element is independent, so the OpenMP variant is
// bit-identical to the serial one.
void nearest_centroid_serial(const std::vector<float>& values,
                             const std::vector<float>& centroids,
                             std::vector<uint8_t>& out);
void nearest_centroid_omp(const std::vector<float>& values,
                          const std::vector<float>& centroids,
                          std::vector<uint8_t>& out);

} // namespace eie
