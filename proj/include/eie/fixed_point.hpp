#pragma once

#include <cmath>
#include <cstdint>

#include "eie/errors.hpp"

namespace eie {

// W4A16 numeric contract: 4-bit stored weights decode through a codebook to
// 16-bit fixed point, activations are 16-bit fixed point, and products
// accumulate in a wraparound 32-bit register. Values are interpreted as Qm.n
// with n fraction bits (default Q8.8).

inline constexpr int kDefaultFracBits = 8;

struct Fixed16 {
    int16_t raw = 0;
    bool operator==(const Fixed16&) const = default;
};

// Wraparound (modular) 32-bit accumulator. Additions never saturate, so any
// summation order produces the same bits; saturation happens only when
// narrowing back to Fixed16.
struct Acc32 {
    int32_t raw = 0;

    void add(int32_t product) {
        raw = static_cast<int32_t>(static_cast<uint32_t>(raw) +
                                   static_cast<uint32_t>(product));
    }

    bool operator==(const Acc32&) const = default;
};

inline void check_frac_bits(int frac_bits) {
    if (frac_bits < 0 || frac_bits > 15)
        throw ValidationError("fraction bits must be in [0, 15]");
}

// Round to nearest with ties away from zero, then saturate to 16 bits.
inline Fixed16 quantize_value(float x, int frac_bits = kDefaultFracBits) {
    check_frac_bits(frac_bits);
    if (std::isnan(x)) throw ValidationError("cannot quantize NaN");
    const double scaled = std::round(static_cast<double>(x) * static_cast<double>(1 << frac_bits));
    if (scaled >= 32767.0) return Fixed16{32767};
    if (scaled <= -32768.0) return Fixed16{-32768};
    return Fixed16{static_cast<int16_t>(scaled)};
}

// raw / 2^n, exact: every int16 and every power-of-two quotient is
// representable in float.
inline float dequantize_value(Fixed16 v, int frac_bits = kDefaultFracBits) {
    check_frac_bits(frac_bits);
    return static_cast<float>(v.raw) / static_cast<float>(1 << frac_bits);
}

// 16x16 -> 32 multiply; |product| <= 2^30, always exact in int32.
inline int32_t mul16(Fixed16 a, Fixed16 b) {
    return static_cast<int32_t>(a.raw) * static_cast<int32_t>(b.raw);
}

// acc >> n with arithmetic shift (truncation toward -inf), saturated to the
// 16-bit range.
inline Fixed16 narrow_accumulator(Acc32 acc, int frac_bits) {
    check_frac_bits(frac_bits);
    const int32_t shifted = acc.raw >> frac_bits;
    if (shifted > 32767) return Fixed16{32767};
    if (shifted < -32768) return Fixed16{-32768};
    return Fixed16{static_cast<int16_t>(shifted)};
}

inline Fixed16 relu(Fixed16 v) {
    return v.raw < 0 ? Fixed16{0} : v;
}

} // namespace eie
