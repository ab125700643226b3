#pragma once

// Periodic continued fractions of quadratic irrationals (s + sqrt(d)) / t.

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pellkit/arith.hpp"

namespace pellkit {

/// (s + sqrt(d)) / t with d a positive non-square and t | d - s^2.
///
/// Inputs violating the divisibility condition are rescaled on construction:
/// (s, t, d) -> (s|t|, t|t|, d t^2), which leaves the value unchanged.
class QuadIrr {
public:
    QuadIrr(Integer d, Integer s, Integer t)
        : d_(std::move(d)), s_(std::move(s)), t_(std::move(t))
    {
        if (t_ == 0)
            throw std::invalid_argument("quadratic irrational: t must be nonzero");
        if (d_ < 0)
            throw std::invalid_argument("quadratic irrational: d must be nonnegative");
        if (is_perfect_square(d_))
            throw std::domain_error("quadratic irrational: d = " + d_.str() + " is a perfect square");
        if ((d_ - s_ * s_) % t_ != 0) {
            const Integer scale = abs(t_);
            s_ *= scale;
            d_ *= t_ * t_;
            t_ *= scale;
        }
    }

    static QuadIrr sqrt_of(const Integer& d) { return QuadIrr(d, 0, 1); }

    const Integer& d() const { return d_; }
    const Integer& s() const { return s_; }
    const Integer& t() const { return t_; }

    friend bool operator==(const QuadIrr&, const QuadIrr&) = default;

private:
    Integer d_;
    Integer s_;
    Integer t_;
};

struct SurdState {
    Integer s;
    Integer t;
    friend bool operator==(const SurdState&, const SurdState&) = default;
};

/// Partial quotients a_0 .. a_{k-1} with a_j .. a_{k-1} repeating, plus the
/// (s_n, t_n) states that produced them. Indexing past k unrolls the period.
struct CFExpansion {
    QuadIrr alpha;
    std::vector<Integer> quotients;
    std::vector<SurdState> aux;
    std::size_t preperiod_len = 0;
    std::size_t period_len = 0;

    std::size_t folded(std::size_t n) const
    {
        if (n < preperiod_len)
            return n;
        return preperiod_len + (n - preperiod_len) % period_len;
    }

    const Integer& quotient(std::size_t n) const { return quotients[folded(n)]; }
    const Integer& s(std::size_t n) const { return aux[folded(n)].s; }
    const Integer& t(std::size_t n) const { return aux[folded(n)].t; }

    std::span<const Integer> preperiod() const { return {quotients.data(), preperiod_len}; }
    std::span<const Integer> period() const { return {quotients.data() + preperiod_len, period_len}; }
};

inline constexpr std::size_t kDefaultMaxTerms = std::size_t{1} << 20;

/// floor((s + sqrt(d)) / t) for non-square d.
inline Integer surd_floor(const Integer& s, const Integer& d, const Integer& t)
{
    const Integer w = s + isqrt(d);
    return t > 0 ? floor_div(w, t) : floor_div(w + 1, t);
}

/// Runs a_n = floor((s_n + sqrt d)/t_n), s_{n+1} = a_n t_n - s_n,
/// t_{n+1} = (d - s_{n+1}^2)/t_n until a state repeats.
inline CFExpansion expand(const QuadIrr& alpha, std::size_t max_terms = kDefaultMaxTerms)
{
    CFExpansion out{alpha, {}, {}, 0, 0};
    const Integer& d = alpha.d();
    std::map<std::pair<Integer, Integer>, std::size_t> seen;

    Integer s = alpha.s();
    Integer t = alpha.t();
    for (std::size_t n = 0;; ++n) {
        auto [it, inserted] = seen.try_emplace({s, t}, n);
        if (!inserted) {
            out.preperiod_len = it->second;
            out.period_len = n - it->second;
            return out;
        }
        if (n >= max_terms)
            throw std::runtime_error("continued fraction: no period within " + std::to_string(max_terms) +
                                     " terms");
        Integer a = surd_floor(s, d, t);
        out.quotients.push_back(a);
        out.aux.push_back({s, t});

        Integer s_next = a * t - s;
        Integer num = d - s_next * s_next;
        if (num % t != 0)
            throw std::logic_error("continued fraction: inexact step (input not normalized)");
        t = num / t;
        s = std::move(s_next);
    }
}

struct Convergent {
    Integer p;
    Integer q;
};

/// p_m / q_m for m = -1, 0, 1, ..., with (p_{-1}, q_{-1}) = (1, 0).
class ConvergentSeq {
public:
    explicit ConvergentSeq(std::vector<Convergent> from_minus_one) : items_(std::move(from_minus_one)) {}

    const Convergent& at(long m) const
    {
        if (m < -1 || m > upto())
            throw std::out_of_range("convergent index " + std::to_string(m));
        return items_[static_cast<std::size_t>(m + 1)];
    }
    long upto() const { return static_cast<long>(items_.size()) - 2; }

private:
    std::vector<Convergent> items_;
};

inline ConvergentSeq convergents(const CFExpansion& exp, std::size_t upto)
{
    std::vector<Convergent> items;
    items.reserve(upto + 2);
    items.push_back({1, 0});
    Integer p_prev = 0, q_prev = 1;  // index -2
    Integer p = 1, q = 0;            // index -1
    for (std::size_t m = 0; m <= upto; ++m) {
        const Integer& a = exp.quotient(m);
        Integer p_next = a * p + p_prev;
        Integer q_next = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
        items.push_back({p, q});
    }
    return ConvergentSeq(std::move(items));
}

// ---------------------------------------------------------------------------
// Dujella-Borwein identity
//
//   alpha (r q_{n+1} + u q_n)^2 - beta (r p_{n+1} + u p_n)^2
//       = (-1)^n (u^2 t_{n+1} + 2 r u s_{n+2} - r^2 t_{n+2})
//
// with p/q the convergents of sqrt(alpha/beta) and (s, t) the states of
// sqrt(alpha beta)/beta.

inline CFExpansion lemma_db_expansion(const Integer& alpha, const Integer& beta)
{
    if (alpha <= 0 || beta <= 0)
        throw std::invalid_argument("lemma_db: alpha and beta must be positive");
    if (is_perfect_square(alpha * beta))
        throw std::domain_error("lemma_db: alpha*beta is a perfect square");
    return expand(QuadIrr(alpha * beta, 0, beta));
}

inline Integer lemma_db_value(const CFExpansion& exp, std::size_t n, const Integer& r, const Integer& u)
{
    Integer v = u * u * exp.t(n + 1) + 2 * r * u * exp.s(n + 2) - r * r * exp.t(n + 2);
    return (n % 2 == 0) ? v : Integer(-v);
}

inline Integer lemma_db_value(const Integer& alpha, const Integer& beta, std::size_t n, const Integer& r,
                              const Integer& u)
{
    return lemma_db_value(lemma_db_expansion(alpha, beta), n, r, u);
}

/// Left-hand side of the identity, straight from the convergents.
inline Integer lemma_db_lhs(const Integer& alpha, const Integer& beta, const CFExpansion& exp, std::size_t n,
                            const Integer& r, const Integer& u)
{
    const auto conv = convergents(exp, n + 1);
    const auto m = static_cast<long>(n);
    const Integer q = r * conv.at(m + 1).q + u * conv.at(m).q;
    const Integer p = r * conv.at(m + 1).p + u * conv.at(m).p;
    return alpha * q * q - beta * p * p;
}

inline Integer lemma_db_lhs(const Integer& alpha, const Integer& beta, std::size_t n, const Integer& r,
                            const Integer& u)
{
    return lemma_db_lhs(alpha, beta, lemma_db_expansion(alpha, beta), n, r, u);
}

// ---------------------------------------------------------------------------
// Worley / Dujella candidates

struct WorleyCandidate {
    long m;
    Integer r;
    Integer u;
    int sign;  // +1 or -1
    Integer a;
    Integer b;
};

/// Every (m, r, u, sign) with -1 <= m <= m_max and r u < 2c, together with
/// (a, b) = (r p_{m+1} + sign u p_m, r q_{m+1} + sign u q_m).
///
/// When r u = 0 only (1, 0) and (0, 1) are listed: any other such pair is a
/// multiple of a convergent and never coprime. Sign is only varied when both
/// r and u are positive.
inline std::vector<WorleyCandidate> worley_candidates(const CFExpansion& exp, const Rational& c, long m_max)
{
    if (c <= 0)
        throw std::invalid_argument("worley_candidates: c must be positive");
    if (m_max < -1)
        return {};
    const Rational two_c = 2 * c;
    const auto conv = convergents(exp, static_cast<std::size_t>(m_max + 1));

    std::vector<std::pair<Integer, Integer>> pairs{{1, 0}, {0, 1}};
    for (Integer r = 1; Rational(r) < two_c; ++r)
        for (Integer u = 1; Rational(r * u) < two_c; ++u)
            pairs.emplace_back(r, u);

    std::vector<WorleyCandidate> out;
    for (long m = -1; m <= m_max; ++m) {
        const Convergent& lo = conv.at(m);
        const Convergent& hi = conv.at(m + 1);
        for (const auto& [r, u] : pairs) {
            for (int sign : {+1, -1}) {
                if (sign < 0 && (r == 0 || u == 0))
                    continue;
                out.push_back({m, r, u, sign, r * hi.p + sign * u * lo.p, r * hi.q + sign * u * lo.q});
            }
        }
    }
    return out;
}

inline std::vector<WorleyCandidate> worley_candidates(const QuadIrr& alpha, const Rational& c, long m_max)
{
    return worley_candidates(expand(alpha), c, m_max);
}

}  // namespace pellkit
