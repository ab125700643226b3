#pragma once

// Scans N + D y^2 over a range of y for perfect squares. Values that fit in a
// signed 128-bit word are walked incrementally with residue filters; anything
// larger falls back to Integer arithmetic.

#include <cstdint>

#include "pellkit/arith.hpp"

namespace pellkit::detail {

inline bool fits_i128_scan(const Integer& D, const Integer& N, const Integer& y_hi)
{
    // N + D (y+1)^2 and the running increment must stay below 2^125.
    static const Integer limit = Integer(1) << 125;
    const Integer y = y_hi + 1;
    return D * y * y + abs(N) + 2 * D * y < limit && y_hi < (Integer(1) << 62);
}

inline __int128 to_i128(const Integer& v)
{
    const bool neg = v < 0;
    const Integer m = neg ? Integer(-v) : v;
    const auto lo = static_cast<std::uint64_t>(m & std::numeric_limits<std::uint64_t>::max());
    const auto hi = static_cast<std::uint64_t>(m >> 64);
    const auto mag = static_cast<__int128>((static_cast<unsigned __int128>(hi) << 64) | lo);
    return neg ? -mag : mag;
}

inline Integer from_u128(unsigned __int128 v)
{
    Integer out = static_cast<std::uint64_t>(v >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(v);
    return out;
}

inline std::uint32_t mod_u32(__int128 v, std::uint32_t m)
{
    __int128 r = v % m;
    if (r < 0)
        r += m;
    return static_cast<std::uint32_t>(r);
}

/// Calls visit(x, y) for each y in [y_lo, y_hi] with N + D y^2 = x^2, x >= 0.
template <class Visit>
void scan_square_values(const Integer& D, const Integer& N, const Integer& y_lo, const Integer& y_hi, Visit&& visit)
{
    if (y_lo > y_hi)
        return;
    if (y_lo < 0)
        throw std::invalid_argument("scan_square_values: negative y");

    if (!fits_i128_scan(D, N, y_hi)) {
        Integer value = N + D * y_lo * y_lo;
        Integer inc = D * (2 * y_lo + 1);
        const Integer step = 2 * D;
        for (Integer y = y_lo; y <= y_hi; ++y) {
            if (auto x = is_perfect_square(value))
                visit(*x, y);
            value += inc;
            inc += step;
        }
        return;
    }

    const auto& qr64 = square_residues_64();
    const auto& qrm = square_residues_45045();
    const std::uint32_t M = kResidueModulus;

    const __int128 d = to_i128(D);
    const auto lo = static_cast<std::uint64_t>(y_lo);
    const auto hi = static_cast<std::uint64_t>(y_hi);
    __int128 value = to_i128(N) + d * static_cast<__int128>(lo) * static_cast<__int128>(lo);
    __int128 inc = d * (2 * static_cast<__int128>(lo) + 1);
    const __int128 step = 2 * d;

    std::uint32_t r_value = mod_u32(value, M);
    std::uint32_t r_inc = mod_u32(inc, M);
    const std::uint32_t r_step = mod_u32(step, M);

    for (std::uint64_t y = lo;; ++y) {
        if (value >= 0 && qr64[static_cast<unsigned>(value & 63)] && qrm[r_value]) {
            const auto v = static_cast<unsigned __int128>(value);
            const unsigned __int128 x = isqrt_word(v);
            if (x * x == v)
                visit(from_u128(x), Integer(y));
        }
        if (y == hi)
            break;
        value += inc;
        inc += step;
        r_value += r_inc;
        if (r_value >= M)
            r_value -= M;
        r_inc += r_step;
        if (r_inc >= M)
            r_inc -= M;
    }
}

}  // namespace pellkit::detail
