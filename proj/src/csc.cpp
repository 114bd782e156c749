#include "eie/csc.hpp"

#include <algorithm>
#include <cstring>

#include "eie/errors.hpp"
#include "eie/io_util.hpp"

namespace eie {

uint32_t local_rows_for_pe(uint32_t rows, uint32_t num_pes, uint32_t pe_id) {
    if (pe_id >= rows) return 0;
    return (rows - pe_id - 1) / num_pes + 1;
}

std::vector<DenseSlice> partition_rows(const QuantizedMatrix& qm, uint32_t num_pes) {
    if (num_pes < 1) throw ValidationError("num_pes must be >= 1");
    std::vector<DenseSlice> out(num_pes);
    for (uint32_t pe = 0; pe < num_pes; ++pe) {
        DenseSlice& s = out[pe];
        s.pe_id = pe;
        s.cols = qm.cols;
        s.local_rows = local_rows_for_pe(qm.rows, num_pes, pe);
        s.idx.resize(size_t(s.local_rows) * s.cols);
        for (uint32_t lr = 0; lr < s.local_rows; ++lr) {
            const uint32_t gr = global_row(pe, lr, num_pes);
            std::copy_n(qm.idx.begin() + size_t(gr) * qm.cols, qm.cols,
                        s.idx.begin() + size_t(lr) * s.cols);
        }
    }
    return out;
}

PESlice encode_pe_csc(const DenseSlice& dense) {
    PESlice s;
    s.pe_id = dense.pe_id;
    s.local_rows = dense.local_rows;
    s.cols = dense.cols;
    s.p.assign(size_t(dense.cols) + 1, 0);

    for (uint32_t j = 0; j < dense.cols; ++j) {
        uint32_t cursor = 0; // next unoccupied local row in this column
        for (uint32_t r = 0; r < dense.local_rows; ++r) {
            const uint8_t val = dense.idx[size_t(r) * dense.cols + j];
            if (val == 0) continue;
            uint32_t gap = r - cursor;
            while (gap > 15) {
                s.v.push_back(0);
                s.z.push_back(15);
                gap -= 16; // filler skips 15 zeros and occupies one row
            }
            s.v.push_back(val);
            s.z.push_back(static_cast<uint8_t>(gap));
            cursor = r + 1;
        }
        s.p[j + 1] = static_cast<uint32_t>(s.v.size());
    }
    return s;
}

DenseSlice decode_pe_csc(const PESlice& s) {
    if (s.p.size() != size_t(s.cols) + 1 || s.p.front() != 0 ||
        s.p.back() != s.v.size() || s.v.size() != s.z.size())
        throw FormatError("corrupt slice: offset array inconsistent");

    DenseSlice dense;
    dense.pe_id = s.pe_id;
    dense.local_rows = s.local_rows;
    dense.cols = s.cols;
    dense.idx.assign(size_t(s.local_rows) * s.cols, 0);

    for (uint32_t j = 0; j < s.cols; ++j) {
        if (s.p[j] > s.p[j + 1]) throw FormatError("corrupt slice: offsets not monotone");
        uint64_t position = 0;
        for (uint32_t e = s.p[j]; e < s.p[j + 1]; ++e) {
            position += s.z[e];
            if (position >= s.local_rows)
                throw FormatError("corrupt slice: decoded position exceeds local rows");
            if (s.v[e] != 0)
                dense.idx[size_t(position) * s.cols + j] = s.v[e];
            position += 1;
        }
    }
    return dense;
}

std::vector<PESlice> encode_slices_serial(const std::vector<DenseSlice>& dense) {
    std::vector<PESlice> out(dense.size());
    for (size_t i = 0; i < dense.size(); ++i) out[i] = encode_pe_csc(dense[i]);
    return out;
}

std::vector<PESlice> encode_slices_omp(const std::vector<DenseSlice>& dense) {
    std::vector<PESlice> out(dense.size());
    const int64_t n = static_cast<int64_t>(dense.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) out[i] = encode_pe_csc(dense[i]);
    return out;
}

CompressedModel encode_model(const QuantizedMatrix& qm, uint32_t num_pes, int q_frac_bits) {
    if (num_pes < 1 || num_pes > 0xffff) throw ValidationError("num_pes must be in [1, 65535]");
    check_frac_bits(q_frac_bits);
    CompressedModel m;
    m.rows = qm.rows;
    m.cols = qm.cols;
    m.num_pes = static_cast<uint16_t>(num_pes);
    m.q_frac_bits = static_cast<uint8_t>(q_frac_bits);
    m.codebook = qm.codebook;
    m.slices = encode_slices_omp(partition_rows(qm, num_pes));
    return m;
}

QuantizedMatrix decode_model(const CompressedModel& m) {
    QuantizedMatrix qm;
    qm.rows = m.rows;
    qm.cols = m.cols;
    qm.codebook = m.codebook;
    qm.idx.assign(size_t(m.rows) * m.cols, 0);
    for (const PESlice& s : m.slices) {
        const DenseSlice dense = decode_pe_csc(s);
        for (uint32_t lr = 0; lr < dense.local_rows; ++lr) {
            const uint32_t gr = global_row(dense.pe_id, lr, m.num_pes);
            std::copy_n(dense.idx.begin() + size_t(lr) * dense.cols, dense.cols,
                        qm.idx.begin() + size_t(gr) * qm.cols);
        }
    }
    return qm;
}

StorageStats storage_stats(const CompressedModel& m) {
    StorageStats st;
    uint64_t entries = 0;
    for (const PESlice& s : m.slices) entries += s.entries();
    st.weight_bits = 4 * entries;
    st.index_bits = 4 * entries;
    st.offset_bits = 32ull * m.num_pes * (uint64_t(m.cols) + 1);
    st.codebook_bits = 16 * 16;
    st.total_bits = st.weight_bits + st.index_bits + st.offset_bits + st.codebook_bits;
    st.dense_bits = 32ull * m.rows * m.cols;
    st.compression_ratio = st.total_bits ? double(st.dense_bits) / double(st.total_bits) : 0.0;
    st.index_overhead_fraction = st.weight_bits ? double(st.index_bits) / double(st.weight_bits) : 0.0;
    return st;
}

// ---------------------------------------------------------------------------
// EIEM1 container
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[6] = {'E', 'I', 'E', 'M', '1', '\0'};
constexpr uint16_t kVersion = 1;
constexpr uint64_t kMaxEntries = uint64_t(1) << 28;

template <typename T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

struct Reader {
    const std::string& bytes;
    size_t off = 0;

    template <typename T>
    T get(const char* what) {
        if (off + sizeof(T) > bytes.size())
            throw FormatError(std::string("truncated model file reading ") + what);
        T v;
        std::memcpy(&v, bytes.data() + off, sizeof(T));
        off += sizeof(T);
        return v;
    }
};

void pack_nibbles(std::string& out, const std::vector<uint8_t>& vals) {
    for (size_t i = 0; i < vals.size(); i += 2) {
        uint8_t byte = vals[i] & 0x0f; // low nibble first
        if (i + 1 < vals.size()) byte |= uint8_t(vals[i + 1] & 0x0f) << 4;
        out.push_back(static_cast<char>(byte));
    }
}

std::vector<uint8_t> unpack_nibbles(Reader& r, size_t count, const char* what) {
    const size_t nbytes = (count + 1) / 2;
    if (r.off + nbytes > r.bytes.size())
        throw FormatError(std::string("truncated model file reading ") + what);
    std::vector<uint8_t> vals(count);
    for (size_t i = 0; i < count; ++i) {
        const uint8_t byte = static_cast<uint8_t>(r.bytes[r.off + i / 2]);
        vals[i] = (i % 2 == 0) ? (byte & 0x0f) : (byte >> 4);
    }
    if (count % 2 == 1) {
        const uint8_t last = static_cast<uint8_t>(r.bytes[r.off + nbytes - 1]);
        if (last >> 4) throw FormatError("nonzero padding nibble");
    }
    r.off += nbytes;
    return vals;
}

void validate_model(const CompressedModel& m) {
    if (m.codebook.centroids.empty() || m.codebook.centroids[0].raw != 0)
        throw FormatError("codebook entry 0 must be zero");
    if (m.codebook.centroids.size() > 16)
        throw FormatError("codebook larger than 16 entries");
    for (size_t i = 2; i < m.codebook.centroids.size(); ++i)
        if (m.codebook.centroids[i - 1].raw >= m.codebook.centroids[i].raw)
            throw FormatError("codebook centroids not strictly increasing");
    for (size_t i = 1; i < m.codebook.centroids.size(); ++i)
        if (m.codebook.centroids[i].raw == 0)
            throw FormatError("zero centroid outside entry 0");
    if (m.slices.size() != m.num_pes) throw FormatError("slice count mismatch");
    for (uint32_t pe = 0; pe < m.num_pes; ++pe) {
        const PESlice& s = m.slices[pe];
        if (s.pe_id != pe) throw FormatError("slice pe_id mismatch");
        if (s.cols != m.cols) throw FormatError("slice cols mismatch");
        if (s.local_rows != local_rows_for_pe(m.rows, m.num_pes, pe))
            throw FormatError("slice local_rows mismatch");
        for (uint8_t val : s.v)
            if (val >= m.codebook.centroids.size())
                throw FormatError("weight index outside codebook");
        decode_pe_csc(s); // checks offsets and decoded positions
    }
}

} // namespace

void write_model(const CompressedModel& m, const std::string& path) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put<uint16_t>(out, kVersion);
    put<uint32_t>(out, m.rows);
    put<uint32_t>(out, m.cols);
    put<uint16_t>(out, m.num_pes);
    put<uint8_t>(out, m.q_frac_bits);
    put<uint8_t>(out, static_cast<uint8_t>(m.codebook.n_bits));
    for (size_t i = 0; i < 16; ++i) {
        const int16_t raw = i < m.codebook.centroids.size() ? m.codebook.centroids[i].raw : 0;
        put<uint16_t>(out, static_cast<uint16_t>(raw));
    }
    for (const PESlice& s : m.slices) {
        put<uint32_t>(out, static_cast<uint32_t>(s.entries()));
        for (uint32_t off : s.p) put<uint32_t>(out, off);
        pack_nibbles(out, s.v);
        pack_nibbles(out, s.z);
    }
    write_file_atomic(path, out);
}

CompressedModel read_model(const std::string& path) {
    const std::string bytes = read_file_bytes(path);
    Reader r{bytes};

    if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw FormatError(path + ": bad magic, not an EIEM1 model");
    r.off = sizeof(kMagic);
    const auto version = r.get<uint16_t>("version");
    if (version != kVersion)
        throw FormatError(path + ": unsupported version " + std::to_string(version));

    CompressedModel m;
    m.rows = r.get<uint32_t>("rows");
    m.cols = r.get<uint32_t>("cols");
    m.num_pes = r.get<uint16_t>("num_pes");
    m.q_frac_bits = r.get<uint8_t>("q_fraction_bits");
    const auto n_bits = r.get<uint8_t>("n_bits");
    if (m.num_pes < 1) throw FormatError(path + ": num_pes must be >= 1");
    if (m.q_frac_bits > 15) throw FormatError(path + ": q_fraction_bits out of range");
    if (n_bits < 1 || n_bits > 4) throw FormatError(path + ": n_bits out of range");
    if (uint64_t(m.rows) * m.cols > kMaxEntries) throw FormatError(path + ": dimension overflow");
    m.codebook.n_bits = n_bits;

    int16_t slots[16];
    for (auto& slot : slots) slot = static_cast<int16_t>(r.get<uint16_t>("codebook"));
    // Trailing zero slots are padding; the logical codebook is the nonzero
    // prefix after the reserved zero entry.
    size_t logical = 16;
    while (logical > 1 && slots[logical - 1] == 0) --logical;
    m.codebook.centroids.clear();
    for (size_t i = 0; i < logical; ++i) m.codebook.centroids.push_back(Fixed16{slots[i]});

    m.slices.resize(m.num_pes);
    for (uint32_t pe = 0; pe < m.num_pes; ++pe) {
        PESlice& s = m.slices[pe];
        s.pe_id = pe;
        s.cols = m.cols;
        s.local_rows = local_rows_for_pe(m.rows, m.num_pes, pe);
        const auto entry_count = r.get<uint32_t>("entry_count");
        if (entry_count > kMaxEntries) throw FormatError(path + ": entry count overflow");
        s.p.resize(size_t(m.cols) + 1);
        for (auto& off : s.p) off = r.get<uint32_t>("offsets");
        s.v = unpack_nibbles(r, entry_count, "weights");
        s.z = unpack_nibbles(r, entry_count, "indices");
    }
    if (r.off != bytes.size()) throw FormatError(path + ": trailing bytes");

    try {
        validate_model(m);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
    return m;
}

} // namespace eie
