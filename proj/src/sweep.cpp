#include "eie/sweep.hpp"

#include <charconv>
#include <random>

#include "eie/errors.hpp"

namespace eie {

PrunePolicy parse_policy(const std::string& name) {
    if (name == "magnitude") return PrunePolicy::Magnitude;
    if (name == "balanced") return PrunePolicy::Balanced;
    if (name == "nm") return PrunePolicy::StructuredNM;
    throw ValidationError("unknown policy '" + name + "' (magnitude|balanced|nm)");
}

PruneMask prune_with_policy(const DenseMatrix& w, const SweepConfig& cfg, double density) {
    switch (cfg.policy) {
        case PrunePolicy::Magnitude: return prune_magnitude(w, density);
        case PrunePolicy::Balanced: return prune_load_balanced(w, density, cfg.num_pes);
        case PrunePolicy::StructuredNM: return prune_structured_nm(w, cfg.nm_keep, cfg.nm_group);
    }
    throw ValidationError("unknown policy");
}

ActivationVector sweep_activations(uint32_t cols, uint64_t seed) {
    std::mt19937_64 rng(seed);
    ActivationVector x(cols);
    for (auto& v : x) {
        const uint64_t u = rng();
        const int16_t mag = static_cast<int16_t>(64 + (u >> 1) % 448); // [64, 511]
        v.raw = (u & 1) ? static_cast<int16_t>(-mag) : mag;
    }
    return x;
}

namespace {

SweepRow run_point(const DenseMatrix& w, const ActivationVector& x, const SweepConfig& cfg,
                   double density) {
    const PruneMask mask = prune_with_policy(w, cfg, density);

    KmeansConfig kcfg;
    kcfg.max_iter = cfg.kmeans_max_iter;
    kcfg.seed = cfg.seed;
    kcfg.frac_bits = cfg.frac_bits;
    const QuantizedMatrix qm = kmeans_codebook(w, mask, kcfg);
    const CompressedModel model = encode_model(qm, cfg.num_pes, cfg.frac_bits);

    SimConfig scfg;
    scfg.num_pes = model.num_pes;
    scfg.fifo_depth = cfg.fifo_depth;
    scfg.apply_relu = cfg.apply_relu;
    scfg.fillers_cost_cycle = cfg.fillers_cost_cycle;
    scfg.cost_table = cfg.cost_table;
    const auto [out, rep] = simulate_spmv(model, x, scfg);
    (void)out;

    return SweepRow{density,          rep.total_cycles,          rep.dense_cycles, rep.speedup,
                    rep.storage.compression_ratio, rep.load_imbalance, rep.energy_proxy};
}

} // namespace

std::vector<SweepRow> density_sweep(const DenseMatrix& w, const std::vector<double>& densities,
                                    const SweepConfig& cfg) {
    for (double d : densities)
        if (cfg.policy != PrunePolicy::StructuredNM && !(d > 0.0 && d <= 1.0))
            throw ValidationError("sweep densities must be in (0, 1]");

    const ActivationVector x = sweep_activations(w.cols, cfg.seed);
    std::vector<SweepRow> rows(densities.size());

    if (cfg.parallel) {
        const int64_t n = static_cast<int64_t>(densities.size());
        std::exception_ptr failure; // exceptions must not escape the parallel region
#pragma omp parallel for schedule(dynamic)
        for (int64_t i = 0; i < n; ++i) {
            try {
                rows[i] = run_point(w, x, cfg, densities[i]);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (size_t i = 0; i < densities.size(); ++i) rows[i] = run_point(w, x, cfg, densities[i]);
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv = kSweepCsvHeader;
    csv += '\n';
    for (const SweepRow& r : rows) {
        csv += format_double(r.density);
        csv += ',';
        csv += std::to_string(r.sparse_cycles);
        csv += ',';
        csv += std::to_string(r.dense_cycles);
        csv += ',';
        csv += format_double(r.speedup);
        csv += ',';
        csv += format_double(r.compression_ratio);
        csv += ',';
        csv += format_double(r.load_imbalance);
        csv += ',';
        csv += format_double(r.energy_proxy);
        csv += '\n';
    }
    return csv;
}

} // namespace eie
