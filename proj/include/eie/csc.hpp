#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eie/compress.hpp"

namespace eie {

// One PE's dense share of the index grid: rows {pe_id, pe_id + num_pes, ...}
// stacked in ascending global order.
struct DenseSlice {
    uint32_t pe_id = 0;
    uint32_t local_rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> idx; // local_rows x cols, row-major

    bool operator==(const DenseSlice&) const = default;
};

// Compressed-sparse-column share of one PE. v holds 4-bit codebook indices,
// z holds the 4-bit count of zeros skipped since the previous entry in the
// same column, p holds per-column offsets into v/z. A gap longer than 15 is
// bridged by filler entries (v == 0, z == 15); each entry, filler or not,
// occupies one local row.
struct PESlice {
    uint32_t pe_id = 0;
    uint32_t local_rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> v;
    std::vector<uint8_t> z;
    std::vector<uint32_t> p; // cols + 1 offsets, p[0] == 0

    size_t entries() const { return v.size(); }

    bool operator==(const PESlice&) const = default;
};

struct CompressedModel {
    uint32_t rows = 0;
    uint32_t cols = 0;
    uint16_t num_pes = 1;
    uint8_t q_frac_bits = kDefaultFracBits;
    Codebook codebook;
    std::vector<PESlice> slices;

    bool operator==(const CompressedModel&) const = default;
};

struct StorageStats {
    uint64_t dense_bits = 0;    // 32-bit float baseline
    uint64_t weight_bits = 0;   // 4 bits per stored entry (fillers included)
    uint64_t index_bits = 0;    // 4 bits per stored gap
    uint64_t offset_bits = 0;   // 32 bits per PE per column boundary
    uint64_t codebook_bits = 0; // 16 slots x 16 bits
    uint64_t total_bits = 0;
    double compression_ratio = 0.0;
    double index_overhead_fraction = 0.0; // index_bits / weight_bits
};

// Interleaved row partition: PE k owns global rows {k, k + num_pes, ...}.
uint32_t local_rows_for_pe(uint32_t rows, uint32_t num_pes, uint32_t pe_id);
inline uint32_t global_row(uint32_t pe_id, uint32_t local_row, uint32_t num_pes) {
    return local_row * num_pes + pe_id;
}

std::vector<DenseSlice> partition_rows(const QuantizedMatrix& qm, uint32_t num_pes);

PESlice encode_pe_csc(const DenseSlice& dense);
DenseSlice decode_pe_csc(const PESlice& s);

// Slices are independent; the OpenMP variant encodes them concurrently and is
// bit-identical to the serial one.
std::vector<PESlice> encode_slices_serial(const std::vector<DenseSlice>& dense);
std::vector<PESlice> encode_slices_omp(const std::vector<DenseSlice>& dense);

CompressedModel encode_model(const QuantizedMatrix& qm, uint32_t num_pes,
                             int q_frac_bits = kDefaultFracBits);
QuantizedMatrix decode_model(const CompressedModel& m);

StorageStats storage_stats(const CompressedModel& m);

// EIEM1 container (little-endian): magic "EIEM1\0", u16 version, u32 rows,
// u32 cols, u16 num_pes, u8 q_fraction_bits, u8 n_bits, 16x u16 codebook raw
// values, then per PE: u32 entry_count, (cols+1) x u32 offsets, nibble-packed
// v (low nibble first), nibble-packed z.
void write_model(const CompressedModel& m, const std::string& path);
CompressedModel read_model(const std::string& path);

} // namespace eie
