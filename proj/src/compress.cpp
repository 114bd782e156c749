#include "eie/compress.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

#include "eie/errors.hpp"

namespace eie {

namespace {

void check_no_nan(const DenseMatrix& w) {
    for (float v : w.values)
        if (std::isnan(v)) throw ValidationError("matrix contains NaN");
}

// Magnitude order used by every pruning policy: larger |value| first, ties to
// the smaller row-major index.
struct MagnitudeGreater {
    const std::vector<float>& values;
    bool operator()(size_t a, size_t b) const {
        const float ma = std::fabs(values[a]);
        const float mb = std::fabs(values[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    }
};

size_t round_count(double density, size_t total) {
    const auto k = static_cast<size_t>(std::llround(density * double(total)));
    return std::min(k, total);
}

} // namespace

size_t PruneMask::popcount() const {
    return static_cast<size_t>(std::count(keep.begin(), keep.end(), uint8_t{1}));
}

double PruneMask::density() const {
    return keep.empty() ? 0.0 : double(popcount()) / double(keep.size());
}

PruneMask prune_magnitude(const DenseMatrix& w, double density) {
    if (!(density > 0.0 && density <= 1.0)) throw ValidationError("density must be in (0, 1]");
    check_no_nan(w);

    const size_t total = w.values.size();
    const size_t k = round_count(density, total);
    if (k == 0) throw ValidationError("density keeps zero elements (degenerate all-zero matrix)");

    std::vector<size_t> order(total);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), MagnitudeGreater{w.values});

    PruneMask mask{w.rows, w.cols, std::vector<uint8_t>(total, 0)};
    for (size_t i = 0; i < k; ++i) mask.keep[order[i]] = 1;
    return mask;
}

PruneMask prune_load_balanced(const DenseMatrix& w, double density, uint32_t num_pes) {
    if (!(density > 0.0 && density <= 1.0)) throw ValidationError("density must be in (0, 1]");
    if (num_pes < 1) throw ValidationError("num_pes must be >= 1");
    check_no_nan(w);

    PruneMask mask{w.rows, w.cols, std::vector<uint8_t>(w.values.size(), 0)};
    size_t kept_total = 0;
    std::vector<size_t> bucket;
    for (uint32_t pe = 0; pe < num_pes; ++pe) {
        bucket.clear();
        for (uint32_t r = pe; r < w.rows; r += num_pes)
            for (uint32_t c = 0; c < w.cols; ++c)
                bucket.push_back(size_t(r) * w.cols + c);
        if (bucket.empty()) continue;
        const size_t k = round_count(density, bucket.size());
        std::sort(bucket.begin(), bucket.end(), MagnitudeGreater{w.values});
        for (size_t i = 0; i < k; ++i) mask.keep[bucket[i]] = 1;
        kept_total += k;
    }
    if (!w.values.empty() && kept_total == 0)
        throw ValidationError("density keeps zero elements (degenerate all-zero matrix)");
    return mask;
}

PruneMask prune_structured_nm(const DenseMatrix& w, uint32_t n_keep, uint32_t m_group) {
    if (m_group < 1 || n_keep < 1 || n_keep > m_group)
        throw ValidationError("need 1 <= n_keep <= m_group");
    if (w.cols % m_group != 0)
        throw ValidationError("cols not divisible by the N:M group size");
    check_no_nan(w);

    PruneMask mask{w.rows, w.cols, std::vector<uint8_t>(w.values.size(), 0)};
    std::vector<size_t> group(m_group);
    for (uint32_t r = 0; r < w.rows; ++r) {
        for (uint32_t g = 0; g < w.cols; g += m_group) {
            const size_t base = size_t(r) * w.cols + g;
            std::iota(group.begin(), group.end(), base);
            std::partial_sort(group.begin(), group.begin() + n_keep, group.end(),
                              MagnitudeGreater{w.values});
            for (uint32_t i = 0; i < n_keep; ++i) mask.keep[group[i]] = 1;
        }
    }
    return mask;
}

void nearest_centroid_serial(const std::vector<float>& values,
                             const std::vector<float>& centroids,
                             std::vector<uint8_t>& out) {
    out.resize(values.size());
    const size_t k = centroids.size();
    for (size_t i = 0; i < values.size(); ++i) {
        const float v = values[i];
        uint8_t best = 0;
        float best_d = std::fabs(v - centroids[0]);
        for (size_t c = 1; c < k; ++c) {
            const float d = std::fabs(v - centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<uint8_t>(c);
            }
        }
        out[i] = best;
    }
}

void nearest_centroid_omp(const std::vector<float>& values,
                          const std::vector<float>& centroids,
                          std::vector<uint8_t>& out) {
    out.resize(values.size());
    const size_t k = centroids.size();
    const int64_t n = static_cast<int64_t>(values.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        const float v = values[i];
        uint8_t best = 0;
        float best_d = std::fabs(v - centroids[0]);
        for (size_t c = 1; c < k; ++c) {
            const float d = std::fabs(v - centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<uint8_t>(c);
            }
        }
        out[i] = best;
    }
}

namespace {

double lloyd_sse(const std::vector<float>& values, const std::vector<float>& centroids,
                 const std::vector<uint8_t>& assign) {
    double sse = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        const double d = double(values[i]) - double(centroids[assign[i]]);
        sse += d * d;
    }
    return sse;
}

std::vector<float> lloyd_cluster(const std::vector<float>& vals, size_t k,
                                 const KmeansConfig& cfg, KmeansTrace* trace) {
    const auto [mn_it, mx_it] = std::minmax_element(vals.begin(), vals.end());
    const float mn = *mn_it, mx = *mx_it;

    std::vector<float> centroids(k);
    if (k == 1) {
        centroids[0] = 0.5f * (mn + mx);
    } else {
        for (size_t i = 0; i < k; ++i)
            centroids[i] = mn + (mx - mn) * float(i) / float(k - 1);
    }
    if (cfg.init_jitter > 0.0) {
        std::mt19937_64 rng(cfg.seed);
        const double span = double(mx) - double(mn);
        for (auto& c : centroids) {
            // Portable uniform in [-1, 1): avoids distribution objects whose
            // output differs between standard libraries.
            const double u = double(rng() >> 11) * 0x1p-52; // [0, 1)
            c += float((2.0 * u - 1.0) * cfg.init_jitter * span);
        }
    }

    std::vector<uint8_t> assign, prev_assign;
    std::vector<double> sums(k);
    std::vector<size_t> counts(k);
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        nearest_centroid_omp(vals, centroids, assign);
        if (trace) {
            trace->sse_per_iter.push_back(lloyd_sse(vals, centroids, assign));
            trace->iterations = uint32_t(iter + 1);
        }
        if (assign == prev_assign) {
            if (trace) trace->converged = true;
            break;
        }
        prev_assign = assign;

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), size_t{0});
        for (size_t i = 0; i < vals.size(); ++i) {
            sums[assign[i]] += double(vals[i]);
            counts[assign[i]] += 1;
        }
        for (size_t c = 0; c < k; ++c)
            if (counts[c] > 0) centroids[c] = float(sums[c] / double(counts[c]));
        // Empty clusters keep their position; they are dropped at finalization.
    }
    return centroids;
}

} // namespace

QuantizedMatrix kmeans_codebook(const DenseMatrix& w, const PruneMask& mask,
                                const KmeansConfig& cfg, KmeansTrace* trace) {
    if (mask.rows != w.rows || mask.cols != w.cols || mask.keep.size() != w.values.size())
        throw ValidationError("mask dimensions do not match matrix");
    if (cfg.n_bits < 1 || cfg.n_bits > 4) throw ValidationError("n_bits must be in [1, 4]");
    if (cfg.max_iter < 1) throw ValidationError("max_iter must be >= 1");
    check_frac_bits(cfg.frac_bits);
    check_no_nan(w);

    size_t kept = 0;
    std::vector<float> vals; // kept nonzero values, row-major order
    for (size_t e = 0; e < w.values.size(); ++e) {
        if (!mask.keep[e]) continue;
        ++kept;
        if (w.values[e] != 0.0f) vals.push_back(w.values[e]);
    }
    if (kept == 0) throw ValidationError("mask keeps zero elements");

    QuantizedMatrix qm;
    qm.rows = w.rows;
    qm.cols = w.cols;
    qm.idx.assign(w.values.size(), 0);
    qm.codebook.n_bits = cfg.n_bits;
    qm.codebook.centroids = {Fixed16{0}};

    if (vals.empty()) {
        // Everything kept is exactly zero; the reserved zero entry covers it.
        if (trace) {
            trace->sse_per_iter.push_back(0.0);
            trace->iterations = 1;
            trace->converged = true;
        }
        return qm;
    }

    const size_t k = (size_t(1) << cfg.n_bits) - 1;

    std::vector<float> distinct(vals);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<float> centroids_f;
    if (distinct.size() <= k) {
        // Few enough distinct values that every one gets its own codebook
        // entry; clustering error is exactly zero in float space.
        centroids_f = distinct;
        if (trace) {
            trace->sse_per_iter.push_back(0.0);
            trace->iterations = 1;
            trace->converged = true;
        }
    } else {
        centroids_f = lloyd_cluster(vals, k, cfg, trace);
    }

    // Quantize, drop anything that lands on the reserved zero, dedup, sort.
    std::vector<int16_t> raws;
    for (float c : centroids_f) {
        const int16_t raw = quantize_value(c, cfg.frac_bits).raw;
        if (raw != 0) raws.push_back(raw);
    }
    std::sort(raws.begin(), raws.end());
    raws.erase(std::unique(raws.begin(), raws.end()), raws.end());

    qm.codebook.centroids.reserve(raws.size() + 1);
    for (int16_t raw : raws) qm.codebook.centroids.push_back(Fixed16{raw});

    // Final assignment: kept nonzero values pick the nearest learned centroid
    // (never the reserved zero, so a fully dense matrix still costs a MAC per
    // element); kept exact zeros and pruned elements stay at index 0.
    const size_t n_learned = raws.size();
    if (n_learned > 0) {
        std::vector<float> learned(n_learned);
        for (size_t c = 0; c < n_learned; ++c)
            learned[c] = dequantize_value(Fixed16{raws[c]}, cfg.frac_bits);
        for (size_t e = 0; e < w.values.size(); ++e) {
            if (!mask.keep[e] || w.values[e] == 0.0f) continue;
            const float v = w.values[e];
            size_t best = 0;
            float best_d = std::fabs(v - learned[0]);
            for (size_t c = 1; c < n_learned; ++c) {
                const float d = std::fabs(v - learned[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            qm.idx[e] = static_cast<uint8_t>(best + 1);
        }
    }
    return qm;
}

double quantization_sse(const DenseMatrix& w, const PruneMask& mask,
                        const QuantizedMatrix& qm, int frac_bits) {
    if (mask.rows != w.rows || mask.cols != w.cols || qm.rows != w.rows || qm.cols != w.cols)
        throw ValidationError("dimension mismatch");
    double sse = 0.0;
    for (size_t e = 0; e < w.values.size(); ++e) {
        if (!mask.keep[e]) continue;
        const double d = double(w.values[e]) - double(dequantize_value(qm.decode(e), frac_bits));
        sse += d * d;
    }
    return sse;
}

} // namespace eie
