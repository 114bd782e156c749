#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eie/fixed_point.hpp"

namespace eie {

// Row-major dense float matrix, the input to the compression pipeline.
// Zero-sized dimensions are legal (degenerate) so that empty models and
// zero-length vectors stay representable end to end.
struct DenseMatrix {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<float> values;

    float at(uint32_t r, uint32_t c) const { return values[size_t(r) * cols + c]; }
    float& at(uint32_t r, uint32_t c) { return values[size_t(r) * cols + c]; }
    size_t size() const { return values.size(); }

    bool operator==(const DenseMatrix&) const = default;
};

using ActivationVector = std::vector<Fixed16>;

ActivationVector quantize_vector(const std::vector<float>& values, int frac_bits);
std::vector<float> dequantize_vector(const ActivationVector& x, int frac_bits);

// DMAT1 file format: ASCII header line "DMAT1 <rows> <cols>\n" followed by
// rows*cols little-endian 32-bit IEEE-754 floats, row-major. Vectors are
// stored as rows=len, cols=1.
DenseMatrix parse_matrix_file(const std::string& path);
void write_matrix_file(const DenseMatrix& m, const std::string& path);

} // namespace eie
