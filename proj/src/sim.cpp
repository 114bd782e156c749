#include "eie/sim.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "eie/errors.hpp"

namespace eie {

std::vector<std::pair<uint32_t, Fixed16>> lnzd_scan(const ActivationVector& x) {
    std::vector<std::pair<uint32_t, Fixed16>> nz;
    for (uint32_t j = 0; j < x.size(); ++j)
        if (x[j].raw != 0) nz.emplace_back(j, x[j]);
    return nz;
}

uint64_t dense_cycle_model(uint32_t rows, uint32_t cols, uint32_t num_pes) {
    if (num_pes < 1) throw ValidationError("num_pes must be >= 1");
    const uint64_t row_waves = (uint64_t(rows) + num_pes - 1) / num_pes;
    return row_waves * cols;
}

double energy_proxy(const EventCounts& c, const CostTable& t) {
    if (t.mac < 0 || t.weight_read < 0 || t.index_read < 0 || t.offset_read < 0 ||
        t.act_read < 0 || t.act_write < 0)
        throw ValidationError("energy costs must be nonnegative");
    // Each MAC reads one weight and one index, multiplies, and accumulates
    // into the output register; each visited column reads its start and end
    // offsets; each broadcast nonzero is one activation read; each output is
    // one activation write.
    return double(c.macs) * (t.weight_read + t.index_read + t.mac + t.act_write) +
           double(c.columns_visited) * 2.0 * t.offset_read +
           double(c.nnz_activations) * t.act_read +
           double(c.outputs) * t.act_write;
}

namespace {

struct BroadcastItem {
    uint32_t col = 0;
    int16_t x_raw = 0;
};

struct PEState {
    std::deque<BroadcastItem> fifo; // visible entries
    std::vector<BroadcastItem> pending; // committed at end of cycle
    bool in_column = false;
    uint32_t entry = 0;
    uint32_t entry_end = 0;
    uint32_t pos = 0; // next candidate local row within the current column
    std::vector<Acc32> acc;

    size_t occupancy() const { return fifo.size() + pending.size(); }
};

// Advance one PE by one execution slot. Fillers and exhausted columns are
// consumed during fetch at zero cost (unless fillers are configured to cost a
// cycle); the PE performs at most one MAC. Returns true if the slot was used.
bool step_pe(PEState& st, const PESlice& slice, const std::array<int32_t, 16>& table,
             bool fillers_cost_cycle, uint64_t& macs, uint64_t& columns_visited) {
    while (true) {
        if (!st.in_column) {
            if (st.fifo.empty()) return false;
            const BroadcastItem& item = st.fifo.front();
            st.entry = slice.p[item.col];
            st.entry_end = slice.p[item.col + 1];
            st.pos = 0;
            st.in_column = true;
            ++columns_visited; // offset pair fetched
        }
        const int32_t x_raw = st.fifo.front().x_raw;
        while (st.entry < st.entry_end) {
            const uint8_t v = slice.v[st.entry];
            const uint32_t row = st.pos + slice.z[st.entry];
            st.pos = row + 1;
            ++st.entry;
            const bool column_done = st.entry == st.entry_end;
            if (v != 0) {
                st.acc[row].add(table[v] * x_raw);
                ++macs;
                if (column_done) {
                    st.fifo.pop_front();
                    st.in_column = false;
                }
                return true;
            }
            if (fillers_cost_cycle) {
                if (column_done) {
                    st.fifo.pop_front();
                    st.in_column = false;
                }
                return true; // filler occupied the slot, no MAC counted
            }
        }
        st.fifo.pop_front();
        st.in_column = false;
    }
}

} // namespace

std::pair<ActivationVector, SimReport> simulate_spmv(const CompressedModel& m,
                                                     const ActivationVector& x,
                                                     const SimConfig& cfg) {
    if (x.size() != m.cols) throw ValidationError("activation length does not match model cols");
    if (cfg.num_pes != m.num_pes) throw ValidationError("config num_pes does not match model");
    if (cfg.fifo_depth < 1) throw ValidationError("fifo_depth must be >= 1");
    if (m.slices.size() != m.num_pes) throw ValidationError("model slice count mismatch");

    const uint32_t P = m.num_pes;
    std::array<int32_t, 16> table{};
    for (size_t i = 0; i < m.codebook.centroids.size(); ++i) table[i] = m.codebook.centroids[i].raw;

    const auto nonzeros = lnzd_scan(x);

    std::vector<PEState> pes(P);
    for (uint32_t p = 0; p < P; ++p) pes[p].acc.resize(m.slices[p].local_rows);

    SimReport rep;
    rep.per_pe_macs.assign(P, 0);
    rep.per_pe_idle_cycles.assign(P, 0);
    rep.nnz_activations = nonzeros.size();

    uint64_t columns_visited = 0;
    size_t bcast = 0;
    std::vector<uint8_t> worked(P, 0);

    auto any_busy = [&] {
        for (const PEState& st : pes)
            if (!st.fifo.empty() || !st.pending.empty()) return true;
        return false;
    };

    while (bcast < nonzeros.size() || any_busy()) {
        ++rep.total_cycles;

        // Phase 1: broadcast one nonzero to every FIFO, or stall.
        if (bcast < nonzeros.size()) {
            bool all_have_space = true;
            for (const PEState& st : pes)
                if (st.occupancy() >= cfg.fifo_depth) {
                    all_have_space = false;
                    break;
                }
            if (all_have_space) {
                const auto& [col, val] = nonzeros[bcast];
                for (PEState& st : pes) st.pending.push_back({col, val.raw});
                ++bcast;
            } else {
                ++rep.broadcast_stall_cycles;
            }
        }

        // Phase 2: each PE with visible work executes one slot.
        bool anyone_worked = false;
        for (uint32_t p = 0; p < P; ++p) {
            worked[p] = step_pe(pes[p], m.slices[p], table, cfg.fillers_cost_cycle,
                                rep.per_pe_macs[p], columns_visited)
                            ? 1
                            : 0;
            anyone_worked |= worked[p] != 0;
        }

        // A PE is idle only while a peer is actually executing; the fill cycle
        // and trailing drain cycles are not charged to anyone.
        if (anyone_worked)
            for (uint32_t p = 0; p < P; ++p)
                if (!worked[p]) ++rep.per_pe_idle_cycles[p];

        // Commit: broadcasts become visible next cycle.
        for (PEState& st : pes) {
            for (const BroadcastItem& item : st.pending) st.fifo.push_back(item);
            st.pending.clear();
        }
    }

    // Narrow accumulators back to global row order.
    ActivationVector out(m.rows);
    for (uint32_t p = 0; p < P; ++p) {
        for (uint32_t lr = 0; lr < m.slices[p].local_rows; ++lr) {
            Fixed16 y = narrow_accumulator(pes[p].acc[lr], m.q_frac_bits);
            if (cfg.apply_relu) y = relu(y);
            out[global_row(p, lr, P)] = y;
        }
    }

    uint64_t total_macs = 0, max_macs = 0;
    for (uint64_t mcount : rep.per_pe_macs) {
        total_macs += mcount;
        max_macs = std::max(max_macs, mcount);
    }
    const double mean_macs = P ? double(total_macs) / double(P) : 0.0;
    rep.load_imbalance = mean_macs > 0.0 ? double(max_macs) / mean_macs : 1.0;
    rep.storage = storage_stats(m);
    rep.dense_cycles = dense_cycle_model(m.rows, m.cols, P);
    rep.speedup = rep.total_cycles ? double(rep.dense_cycles) / double(rep.total_cycles) : 0.0;
    rep.energy_proxy = energy_proxy(
        EventCounts{total_macs, columns_visited, rep.nnz_activations, m.rows}, cfg.cost_table);
    return {std::move(out), std::move(rep)};
}

} // namespace eie
