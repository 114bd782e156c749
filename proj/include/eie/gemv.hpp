#pragma once

#include "eie/compress.hpp"
#include "eie/matrix.hpp"

namespace eie {

// Reference semantics of the computation the simulator must reproduce bit for
// bit: per row, decode each weight, 16x16->32 multiply, wraparound 32-bit
// accumulation, arithmetic-shift narrowing with saturation, optional ReLU.
// This serial routine is the oracle; keep it independent of the sparse path.
ActivationVector gemv_dense_oracle(const QuantizedMatrix& qm, const ActivationVector& x,
                                   bool apply_relu, int frac_bits = kDefaultFracBits);

// Row-parallel variant. Rows are independent, so output is bit-identical to
// the oracle.
ActivationVector gemv_dense_omp(const QuantizedMatrix& qm, const ActivationVector& x,
                                bool apply_relu, int frac_bits = kDefaultFracBits);

} // namespace eie
