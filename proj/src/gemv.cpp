#include "eie/gemv.hpp"

#include <array>

#include "eie/errors.hpp"

namespace eie {

namespace {

std::array<int32_t, 16> decode_table(const Codebook& cb) {
    std::array<int32_t, 16> t{};
    for (size_t i = 0; i < cb.centroids.size(); ++i) t[i] = cb.centroids[i].raw;
    return t;
}

inline Fixed16 finish_row(Acc32 acc, int frac_bits, bool apply_relu) {
    const Fixed16 y = narrow_accumulator(acc, frac_bits);
    return apply_relu ? relu(y) : y;
}

} // namespace

ActivationVector gemv_dense_oracle(const QuantizedMatrix& qm, const ActivationVector& x,
                                   bool apply_relu, int frac_bits) {
    if (x.size() != qm.cols) throw ValidationError("activation length does not match cols");
    const auto table = decode_table(qm.codebook);
    ActivationVector out(qm.rows);
    for (uint32_t i = 0; i < qm.rows; ++i) {
        Acc32 acc;
        const uint8_t* row = qm.idx.data() + size_t(i) * qm.cols;
        for (uint32_t j = 0; j < qm.cols; ++j)
            acc.add(table[row[j]] * int32_t(x[j].raw));
        out[i] = finish_row(acc, frac_bits, apply_relu);
    }
    return out;
}

ActivationVector gemv_dense_omp(const QuantizedMatrix& qm, const ActivationVector& x,
                                bool apply_relu, int frac_bits) {
    if (x.size() != qm.cols) throw ValidationError("activation length does not match cols");
    const auto table = decode_table(qm.codebook);
    ActivationVector out(qm.rows);
    const int64_t rows = qm.rows;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < rows; ++i) {
        Acc32 acc;
        const uint8_t* row = qm.idx.data() + size_t(i) * qm.cols;
        for (uint32_t j = 0; j < qm.cols; ++j)
            acc.add(table[row[j]] * int32_t(x[j].raw));
        out[i] = finish_row(acc, frac_bits, apply_relu);
    }
    return out;
}

} // namespace eie
