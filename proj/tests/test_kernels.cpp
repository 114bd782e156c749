#include <doctest.h>

#include <random>

#include "eie/compress.hpp"
#include "eie/csc.hpp"
#include "eie/gemv.hpp"
#include "test_util.hpp"

// The OpenMP kernels split work over independent elements (rows, values,
// slices), so every one of them must match its serial reference bit for bit.

using namespace eie;

TEST_CASE("gemv: OpenMP rows match the serial oracle") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const uint32_t rows = 1 + rng() % 96;
        const uint32_t cols = 1 + rng() % 96;
        const QuantizedMatrix qm =
            testutil::random_qm(rng, rows, cols, double(rng() % 101) / 100.0);
        const ActivationVector x = testutil::random_activations(rng, cols, 0.8);
        const bool relu = (rng() & 1) != 0;
        CHECK(gemv_dense_omp(qm, x, relu, 8) == gemv_dense_oracle(qm, x, relu, 8));
    }
}

TEST_CASE("nearest-centroid assignment: OpenMP matches serial") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 20; ++trial) {
        const size_t n = 1 + rng() % 5000;
        const size_t k = 1 + rng() % 15;
        std::vector<float> values(n), centroids(k);
        for (auto& v : values) v = float(int64_t(rng() % 20001) - 10000) / 100.0f;
        for (auto& c : centroids) c = float(int64_t(rng() % 20001) - 10000) / 100.0f;
        std::vector<uint8_t> serial, parallel;
        nearest_centroid_serial(values, centroids, serial);
        nearest_centroid_omp(values, centroids, parallel);
        CHECK(serial == parallel);
    }
}

TEST_CASE("slice encoding: OpenMP matches serial") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 20; ++trial) {
        const QuantizedMatrix qm = testutil::random_qm(rng, 1 + rng() % 100, 1 + rng() % 100,
                                                       double(rng() % 101) / 100.0);
        const auto dense = partition_rows(qm, 1 + rng() % 16);
        CHECK(encode_slices_omp(dense) == encode_slices_serial(dense));
    }
}
