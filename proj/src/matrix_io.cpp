#include "eie/matrix.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <sstream>

#include "eie/errors.hpp"
#include "eie/io_util.hpp"

static_assert(std::endian::native == std::endian::little,
              "DMAT1/EIEM1 serialization assumes a little-endian host");
static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

namespace eie {

namespace {

// Keeps rows*cols*4 bytes comfortably addressable.
constexpr uint64_t kMaxElements = uint64_t(1) << 28;

bool parse_u32(const std::string& tok, uint32_t& out) {
    if (tok.empty() || tok.size() > 10) return false;
    uint64_t v = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + uint64_t(c - '0');
    }
    if (v > std::numeric_limits<uint32_t>::max()) return false;
    out = static_cast<uint32_t>(v);
    return true;
}

} // namespace

ActivationVector quantize_vector(const std::vector<float>& values, int frac_bits) {
    ActivationVector x(values.size());
    for (size_t i = 0; i < values.size(); ++i) x[i] = quantize_value(values[i], frac_bits);
    return x;
}

std::vector<float> dequantize_vector(const ActivationVector& x, int frac_bits) {
    std::vector<float> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = dequantize_value(x[i], frac_bits);
    return out;
}

DenseMatrix parse_matrix_file(const std::string& path) {
    const std::string bytes = read_file_bytes(path);

    const size_t nl = bytes.find('\n');
    if (nl == std::string::npos) throw FormatError(path + ": malformed header (no newline)");
    const std::string header = bytes.substr(0, nl);

    std::istringstream hs(header);
    std::string magic, rtok, ctok, extra;
    hs >> magic >> rtok >> ctok;
    if (magic != "DMAT1" || rtok.empty() || ctok.empty() || (hs >> extra))
        throw FormatError(path + ": malformed header, expected 'DMAT1 <rows> <cols>'");

    DenseMatrix m;
    if (!parse_u32(rtok, m.rows) || !parse_u32(ctok, m.cols))
        throw FormatError(path + ": malformed header, bad dimension");
    const uint64_t count = uint64_t(m.rows) * uint64_t(m.cols);
    if (count > kMaxElements) throw FormatError(path + ": dimension overflow");

    const size_t payload = bytes.size() - nl - 1;
    if (payload < count * 4) throw FormatError(path + ": truncated payload");
    if (payload > count * 4) throw FormatError(path + ": trailing bytes after payload");

    m.values.resize(count);
    if (count > 0) std::memcpy(m.values.data(), bytes.data() + nl + 1, count * 4);
    return m;
}

void write_matrix_file(const DenseMatrix& m, const std::string& path) {
    if (uint64_t(m.rows) * uint64_t(m.cols) != m.values.size())
        throw ValidationError("matrix dims do not match value count");
    std::string bytes = "DMAT1 " + std::to_string(m.rows) + " " + std::to_string(m.cols) + "\n";
    const size_t header = bytes.size();
    bytes.resize(header + m.values.size() * 4);
    if (!m.values.empty())
        std::memcpy(bytes.data() + header, m.values.data(), m.values.size() * 4);
    write_file_atomic(path, bytes);
}

} // namespace eie
