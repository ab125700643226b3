#include <gtest/gtest.h>

#include <random>

#include "pellkit/contfrac.hpp"

using namespace pellkit;

namespace {

std::vector<Integer> ints(std::span<const Integer> s) { return {s.begin(), s.end()}; }

void expect_cf(const QuadIrr& alpha, std::vector<Integer> pre, std::vector<Integer> period)
{
    const CFExpansion e = expand(alpha);
    EXPECT_EQ(ints(e.preperiod()), pre);
    EXPECT_EQ(ints(e.period()), period);
}

}  // namespace

TEST(QuadIrr, Normalizes)
{
    // t must divide d - s^2; (1 + sqrt(3)) / 3 becomes (3 + sqrt(27)) / 9
    const QuadIrr a(3, 1, 3);
    EXPECT_EQ(a.d(), 27);
    EXPECT_EQ(a.s(), 3);
    EXPECT_EQ(a.t(), 9);
    const QuadIrr kept(3, 1, 2);
    EXPECT_EQ(kept.d(), 3);
    EXPECT_EQ(kept.t(), 2);
    const QuadIrr g(5, 1, 2);
    EXPECT_EQ(g.d(), 5);
    EXPECT_EQ(g.t(), 2);
    EXPECT_THROW(QuadIrr(9, 0, 1), std::domain_error);
    EXPECT_THROW(QuadIrr(10, 0, 0), std::invalid_argument);
}

TEST(Expand, Examples)
{
    expect_cf(QuadIrr::sqrt_of(10), {3}, {6});
    expect_cf(QuadIrr::sqrt_of(2), {1}, {2});
    expect_cf(QuadIrr(5, 1, 2), {}, {1});
    EXPECT_THROW(expand(QuadIrr::sqrt_of(9)), std::domain_error);
}

TEST(Expand, MatchesReferenceExpansions)
{
    // reference values from sympy.continued_fraction_periodic
    expect_cf(QuadIrr::sqrt_of(26), {5}, {10});
    expect_cf(QuadIrr::sqrt_of(730), {27}, {54});
    expect_cf(QuadIrr::sqrt_of(61), {7}, {1, 4, 3, 1, 2, 2, 1, 3, 4, 1, 14});
    expect_cf(QuadIrr(13, 2, 3), {}, {1, 1, 6, 1, 1});
    expect_cf(QuadIrr(7, -3, -2), {0, 5}, {1, 1, 1, 4});
}

TEST(Expand, CapIsAnError)
{
    EXPECT_THROW(expand(QuadIrr::sqrt_of(61), 5), std::runtime_error);
}

TEST(Expand, PeriodOneStructure)
{
    for (unsigned p = 3; p <= 50; p += 2) {
        if (!is_prime(p))
            continue;
        for (unsigned k = 0; k <= 5; ++k) {
            const Integer K = ipow(Integer(p), k + 1);
            const CFExpansion e = expand(QuadIrr::sqrt_of(K * K + 1));
            ASSERT_EQ(e.preperiod_len, 1u);
            ASSERT_EQ(e.period_len, 1u);
            ASSERT_EQ(e.quotients[0], K);
            ASSERT_EQ(e.quotients[1], 2 * K);
        }
    }
}

TEST(Expand, ExactDivisibilityProperty)
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        Integer d = rng() % 1'000'000 + 2;
        if (is_perfect_square(d))
            continue;
        const Integer s = static_cast<long long>(rng() % 2001) - 1000;
        Integer t = static_cast<long long>(rng() % 201) - 100;
        if (t == 0)
            t = 1;
        const QuadIrr alpha(d, s, t);
        const CFExpansion e = expand(alpha);
        const Integer& D = alpha.d();
        const Integer root = isqrt(D);
        ASSERT_EQ(e.quotients.size(), e.aux.size());
        ASSERT_EQ(e.preperiod_len + e.period_len, e.quotients.size());
        for (std::size_t n = 0; n + 1 < e.aux.size() + 1; ++n) {
            const auto& cur = e.aux[n];
            ASSERT_NE(cur.t, 0);
            ASSERT_EQ((D - cur.s * cur.s) % cur.t, 0);
            ASSERT_EQ(e.quotients[n], surd_floor(cur.s, D, cur.t));
            if (n >= 1)
                ASSERT_GE(e.quotients[n], 1);
            ASSERT_LT(abs(cur.s), root + 1 + abs(alpha.t()) + abs(alpha.s()));
            const Integer s_next = e.quotients[n] * cur.t - cur.s;
            ASSERT_EQ(s_next, e.s(n + 1));
            ASSERT_EQ((D - s_next * s_next) % cur.t, 0);
            ASSERT_EQ((D - s_next * s_next) / cur.t, e.t(n + 1));
        }
        // the repeat closes the period and nothing repeats earlier
        std::set<std::pair<Integer, Integer>> seen;
        for (const auto& st : e.aux)
            ASSERT_TRUE(seen.insert({st.s, st.t}).second);
        const std::size_t k = e.aux.size();
        const Integer s_k = e.quotients[k - 1] * e.aux[k - 1].t - e.aux[k - 1].s;
        EXPECT_EQ(s_k, e.aux[e.preperiod_len].s);
    }
}

TEST(Convergents, Examples)
{
    const auto c10 = convergents(expand(QuadIrr::sqrt_of(10)), 1);
    EXPECT_EQ(c10.at(-1).p, 1);
    EXPECT_EQ(c10.at(-1).q, 0);
    EXPECT_EQ(c10.at(0).p, 3);
    EXPECT_EQ(c10.at(0).q, 1);
    EXPECT_EQ(c10.at(1).p, 19);
    EXPECT_EQ(c10.at(1).q, 6);
    const auto c2 = convergents(expand(QuadIrr::sqrt_of(2)), 2);
    EXPECT_EQ(c2.at(2).p, 7);
    EXPECT_EQ(c2.at(2).q, 5);
    const auto c26 = convergents(expand(QuadIrr::sqrt_of(26)), 1);
    EXPECT_EQ(c26.at(1).p, 51);
    EXPECT_EQ(c26.at(1).q, 10);
    EXPECT_EQ(51 * 51 - 26 * 100, 1);
    EXPECT_THROW(c26.at(2), std::out_of_range);
}

TEST(Convergents, QualityAndCoprimality)
{
    // |alpha - p/q| < 1/(q q'), i.e. |q (s + sqrt d) - p t| < |t| / q'
    for (const QuadIrr& alpha : {QuadIrr::sqrt_of(61), QuadIrr::sqrt_of(2), QuadIrr(13, 2, 3), QuadIrr(7, -3, -2),
                                 QuadIrr(1000003, 17, 5)}) {
        const CFExpansion e = expand(alpha);
        const auto seq = convergents(e, 40);
        for (long m = 0; m < 40; ++m) {
            const Convergent& c = seq.at(m);
            const Convergent& next = seq.at(m + 1);
            ASSERT_EQ(gcd(c.p, c.q), 1);
            ASSERT_EQ(c.p * seq.at(m - 1).q - c.q * seq.at(m - 1).p, (m % 2 == 0) ? -1 : 1);
            if (c.q == 0)
                continue;
            // scale by t and next.q: |next.q (q s - p t) + next.q q sqrt d| < |t|
            const Integer T = abs(alpha.t());
            const Integer lin = next.q * (c.q * alpha.s() - c.p * alpha.t());
            const Integer rad = next.q * c.q;
            ASSERT_LT(sign_of_surd(lin - T, rad, alpha.d()), 0) << m;
            ASSERT_GT(sign_of_surd(lin + T, rad, alpha.d()), 0) << m;
        }
    }
}

TEST(LemmaDB, Examples)
{
    EXPECT_EQ(lemma_db_value(10, 1, 0, 1, 0), -1);
    EXPECT_EQ(lemma_db_value(10, 1, 0, 0, 1), 1);
    EXPECT_EQ(lemma_db_value(2, 1, 0, 1, 1), 2);
    EXPECT_EQ(lemma_db_lhs(10, 1, 0, 1, 0), 10 * 36 - 361);
    EXPECT_THROW(lemma_db_value(4, 1, 0, 1, 1), std::domain_error);
    EXPECT_THROW(lemma_db_value(2, 8, 0, 1, 1), std::domain_error);
}

TEST(LemmaDB, RandomIdentity)
{
    std::mt19937_64 rng(99);
    int done = 0;
    while (done < 500) {
        const Integer alpha = rng() % 10000 + 1, beta = rng() % 10000 + 1;
        if (is_perfect_square(alpha * beta))
            continue;
        const CFExpansion e = lemma_db_expansion(alpha, beta);
        const std::size_t n = rng() % (e.preperiod_len + e.period_len + 6);
        const Integer r = static_cast<long long>(rng() % 201) - 100;
        const Integer u = static_cast<long long>(rng() % 201) - 100;
        ASSERT_EQ(lemma_db_value(e, n, r, u), lemma_db_lhs(alpha, beta, e, n, r, u))
            << alpha << " " << beta << " n=" << n << " r=" << r << " u=" << u;
        ++done;
    }
}

TEST(Worley, Examples)
{
    const auto cands = worley_candidates(QuadIrr::sqrt_of(10), Rational(3, 2), 0);
    bool found = false;
    for (const auto& w : cands)
        if (w.m == 0 && w.r == 1 && w.u == 1 && w.sign == 1) {
            found = true;
            EXPECT_EQ(w.a, 22);
            EXPECT_EQ(w.b, 7);
        }
    EXPECT_TRUE(found);

    for (const auto& w : worley_candidates(QuadIrr::sqrt_of(7), Rational(1, 2), 6))
        EXPECT_EQ(w.r * w.u, 0);
    EXPECT_THROW(worley_candidates(QuadIrr::sqrt_of(7), Rational(0), 3), std::invalid_argument);
}

TEST(Worley, BoundEnumeratesAllSmallProducts)
{
    // c = p^k / 2 gives every (r, u) with ru < p^k
    for (unsigned p : {3u, 5u, 7u}) {
        for (unsigned k : {1u, 2u}) {
            const Integer K = ipow(Integer(p), k + 1);
            const Integer bound = ipow(Integer(p), k);
            const auto cands = worley_candidates(QuadIrr::sqrt_of(K * K + 1), Rational(bound, 2), 0);
            std::set<std::pair<Integer, Integer>> got;
            for (const auto& w : cands) {
                ASSERT_LT(w.r * w.u, bound);
                if (w.m == 0)
                    got.insert({w.r, w.u});
            }
            for (Integer r = 1; r < bound; ++r)
                for (Integer u = 1; r * u < bound; ++u)
                    EXPECT_TRUE(got.count({r, u})) << p << "^" << k << " " << r << "," << u;
        }
    }
}
