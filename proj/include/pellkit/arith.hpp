#pragma once

// Exact integer utilities shared by every other header.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pellkit {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer parse_integer(std::string_view text)
{
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+'))
        digits.remove_prefix(1);
    if (digits.empty())
        throw std::invalid_argument("empty integer literal");
    for (char ch : digits)
        if (ch < '0' || ch > '9')
            throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    const Integer value{std::string(digits)};
    return text.front() == '-' ? Integer(-value) : value;
}

/// Floor division; the divisor must be nonzero.
inline Integer floor_div(const Integer& a, const Integer& b)
{
    if (b == 0)
        throw std::domain_error("floor_div: division by zero");
    Integer q = a / b;  // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline Integer floor_mod(const Integer& a, const Integer& m)
{
    return a - floor_div(a, m) * m;
}

inline Integer ipow(Integer base, unsigned exponent)
{
    Integer result = 1;
    while (exponent != 0) {
        if (exponent & 1u)
            result *= base;
        exponent >>= 1;
        if (exponent != 0)
            base *= base;
    }
    return result;
}

inline Integer abs(const Integer& n)
{
    return n < 0 ? Integer(-n) : n;
}

inline Integer gcd(const Integer& a, const Integer& b)
{
    return boost::multiprecision::gcd(a, b);
}

namespace detail {

inline unsigned bit_length(std::uint64_t n)
{
    return n == 0 ? 0u : 64u - static_cast<unsigned>(__builtin_clzll(n));
}

inline unsigned bit_length(unsigned __int128 n)
{
    auto hi = static_cast<std::uint64_t>(n >> 64);
    return hi != 0 ? 64u + bit_length(hi) : bit_length(static_cast<std::uint64_t>(n));
}

// Newton iteration from an initial value above the root; the sequence decreases
// strictly until it reaches floor(sqrt(n)).
template <class U>
U isqrt_word(U n)
{
    if (n < 2)
        return n;
    U x = U(1) << ((bit_length(n) + 1) / 2);
    for (;;) {
        U y = (x + n / x) / 2;
        if (y >= x)
            return x;
        x = y;
    }
}

inline const std::array<bool, 64>& square_residues_64()
{
    static const auto table = [] {
        std::array<bool, 64> t{};
        for (unsigned i = 0; i < 64; ++i)
            t[(i * i) % 64] = true;
        return t;
    }();
    return table;
}

// 45045 = 9 * 5 * 7 * 11 * 13
inline constexpr std::uint32_t kResidueModulus = 45045;

inline const std::vector<bool>& square_residues_45045()
{
    static const auto table = [] {
        std::vector<bool> t(kResidueModulus, false);
        for (std::uint64_t i = 0; i < kResidueModulus; ++i)
            t[(i * i) % kResidueModulus] = true;
        return t;
    }();
    return table;
}

}  // namespace detail

/// floor(sqrt(n)) by Newton iteration on exact integers.
inline Integer isqrt(const Integer& n)
{
    if (n < 0)
        throw std::domain_error("isqrt of a negative number");
    if (n <= std::numeric_limits<std::uint64_t>::max())
        return Integer(detail::isqrt_word(static_cast<std::uint64_t>(n)));
    Integer x = Integer(1) << (boost::multiprecision::msb(n) / 2 + 1);
    for (;;) {
        Integer y = (x + n / x) >> 1;
        if (y >= x)
            break;
        x = std::move(y);
    }
    return x;
}

/// The nonnegative root when n is a perfect square; empty otherwise.
inline std::optional<Integer> is_perfect_square(const Integer& n)
{
    if (n < 0)
        return std::nullopt;
    const auto low = static_cast<unsigned>(static_cast<std::uint64_t>(n & 63u));
    if (!detail::square_residues_64()[low])
        return std::nullopt;
    const auto res = static_cast<std::uint32_t>(n % detail::kResidueModulus);
    if (!detail::square_residues_45045()[res])
        return std::nullopt;
    Integer r = isqrt(n);
    if (r * r != n)
        return std::nullopt;
    return r;
}

/// Sign of a + b*sqrt(d) for d >= 0, decided without leaving the integers.
inline int sign_of_surd(const Integer& a, const Integer& b, const Integer& d)
{
    if (d < 0)
        throw std::domain_error("sign_of_surd: negative radicand");
    const int sa = a.sign();
    const int sb = (d == 0) ? 0 : b.sign();
    if (sb == 0)
        return sa;
    if (sa == 0 || sa == sb)
        return sb;
    // opposite signs: compare a^2 with b^2 d
    const Integer lhs = a * a;
    const Integer rhs = b * b * d;
    if (lhs == rhs)
        return 0;
    return lhs > rhs ? sa : sb;
}

// ---------------------------------------------------------------------------
// Primality

enum class Primality { composite, prime, probable_prime };

inline std::string_view to_string(Primality p)
{
    switch (p) {
    case Primality::composite: return "composite";
    case Primality::prime: return "prime";
    case Primality::probable_prime: return "probable_prime";
    }
    return "?";
}

/// Below this bound, strong-probable-prime tests to the first thirteen prime
/// bases (2..41) are a proof of primality (Sorenson and Webster, 2015). It
/// exceeds 2^64.
inline const Integer& deterministic_primality_bound()
{
    static const Integer bound("3317044064679887385961981");
    return bound;
}

namespace detail {

inline constexpr std::array<std::uint32_t, 13> kDeterministicBases{2,  3,  5,  7,  11, 13, 17,
                                                                   19, 23, 29, 31, 37, 41};
inline constexpr std::array<std::uint32_t, 20> kExtraBases{43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
                                                           89, 97, 101, 103, 107, 109, 113, 127, 131, 137};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1u)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline bool strong_probable_prime(std::uint64_t n, std::uint64_t base)
{
    base %= n;
    if (base == 0)
        return true;
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    std::uint64_t x = powmod(base, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (unsigned i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

inline bool strong_probable_prime(const Integer& n, const Integer& base)
{
    const Integer n_minus_1 = n - 1;
    Integer d = n_minus_1;
    unsigned s = 0;
    while (!boost::multiprecision::bit_test(d, 0)) {
        d >>= 1;
        ++s;
    }
    Integer x = boost::multiprecision::powm(base % n, d, n);
    if (x == 1 || x == n_minus_1)
        return true;
    for (unsigned i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n_minus_1)
            return true;
    }
    return false;
}

}  // namespace detail

inline Primality primality(const Integer& n)
{
    if (n < 2)
        return Primality::composite;
    for (std::uint32_t p : detail::kDeterministicBases) {
        if (n == p)
            return Primality::prime;
        if (n % p == 0)
            return Primality::composite;
    }
    if (n < 43 * 43)
        return Primality::prime;

    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        const auto small = static_cast<std::uint64_t>(n);
        for (std::uint32_t b : detail::kDeterministicBases)
            if (!detail::strong_probable_prime(small, b))
                return Primality::composite;
        return Primality::prime;
    }
    for (std::uint32_t b : detail::kDeterministicBases)
        if (!detail::strong_probable_prime(n, Integer(b)))
            return Primality::composite;
    if (n < deterministic_primality_bound())
        return Primality::prime;
    for (std::uint32_t b : detail::kExtraBases)
        if (!detail::strong_probable_prime(n, Integer(b)))
            return Primality::composite;
    return Primality::probable_prime;
}

inline bool is_prime(const Integer& n)
{
    return primality(n) != Primality::composite;
}

/// Positive divisors of n != 0 in increasing order, by trial division.
inline std::vector<Integer> divisors(const Integer& n)
{
    const Integer m = abs(n);
    if (m == 0)
        throw std::domain_error("divisors of zero");
    std::vector<Integer> low, high;
    for (Integer d = 1; d * d <= m; ++d) {
        if (m % d == 0) {
            low.push_back(d);
            if (d * d != m)
                high.push_back(m / d);
        }
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    return low;
}

/// Largest e with base^e dividing n (n != 0, base >= 2).
inline unsigned valuation(Integer n, const Integer& base)
{
    if (n == 0 || base < 2)
        throw std::domain_error("valuation: need n != 0 and base >= 2");
    unsigned e = 0;
    while (n % base == 0) {
        n /= base;
        ++e;
    }
    return e;
}

}  // namespace pellkit
