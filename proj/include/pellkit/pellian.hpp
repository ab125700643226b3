#pragma once

// Decisions and enumeration for x^2 - D y^2 = N.

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pellkit/arith.hpp"
#include "pellkit/contfrac.hpp"
#include "pellkit/detail/square_scan.hpp"

namespace pellkit {

/// Raised when two independent routes disagree about the same equation.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct PellianProblem {
    Integer D;
    Integer N;

    PellianProblem(Integer d, Integer n) : D(std::move(d)), N(std::move(n))
    {
        if (D < 2 || is_perfect_square(D))
            throw std::invalid_argument("pellian: D = " + D.str() + " must be a non-square >= 2");
        if (N == 0)
            throw std::invalid_argument("pellian: N must be nonzero");
    }

    bool satisfied_by(const Integer& x, const Integer& y) const { return x * x - D * y * y == N; }

    friend bool operator==(const PellianProblem&, const PellianProblem&) = default;
};

enum class Verdict { solvable, unsolvable };

enum class Method { fujita, residue, descent, bounded_enumeration, brute_force, paper_family };

inline std::string_view to_string(Verdict v)
{
    return v == Verdict::solvable ? "SOLVABLE" : "UNSOLVABLE";
}

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::fujita: return "fujita";
    case Method::residue: return "residue";
    case Method::descent: return "descent";
    case Method::bounded_enumeration: return "bounded-enumeration";
    case Method::brute_force: return "brute-force";
    case Method::paper_family: return "paper-family";
    }
    return "?";
}

struct Solution {
    Integer x;
    Integer y;
    friend bool operator==(const Solution&, const Solution&) = default;
    friend auto operator<=>(const Solution& a, const Solution& b)
    {
        if (a.y != b.y)
            return a.y < b.y ? std::strong_ordering::less : std::strong_ordering::greater;
        if (a.x != b.x)
            return a.x < b.x ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
};

struct PellianOutcome {
    PellianProblem problem;
    Verdict verdict;
    std::vector<Solution> witnesses;
    Method method;
    Integer search_bound_used;
    std::string certificate;
};

/// Least positive (t, u) with t^2 - D u^2 = sign.
struct PellUnit {
    Integer t;
    Integer u;
};

// ---------------------------------------------------------------------------
// Units

namespace detail {

inline std::pair<Convergent, std::size_t> period_end_convergent(const Integer& D)
{
    const CFExpansion exp = expand(QuadIrr::sqrt_of(D));
    const std::size_t L = exp.period_len;
    const auto conv = convergents(exp, L - 1);
    return {conv.at(static_cast<long>(L) - 1), L};
}

}  // namespace detail

/// Fundamental solution of t^2 - D u^2 = 1, from the convergent closing the
/// first period of sqrt(D) (squared when the period is odd).
inline PellUnit pell_fundamental(const Integer& D)
{
    if (D < 2 || is_perfect_square(D))
        throw std::domain_error("pell_fundamental: D = " + D.str() + " must be a non-square >= 2");
    auto [c, L] = detail::period_end_convergent(D);
    if (L % 2 == 0)
        return {c.p, c.q};
    return {c.p * c.p + D * c.q * c.q, 2 * c.p * c.q};
}

/// Fundamental solution of t^2 - D u^2 = -1 when one exists (odd period).
inline std::optional<PellUnit> negative_pell_fundamental(const Integer& D)
{
    if (D < 2 || is_perfect_square(D))
        throw std::domain_error("negative_pell_fundamental: D must be a non-square >= 2");
    auto [c, L] = detail::period_end_convergent(D);
    if (L % 2 == 0)
        return std::nullopt;
    return PellUnit{c.p, c.q};
}

// ---------------------------------------------------------------------------
// Search bounds

/// Nagell's bound on y for the fundamental solution of each class:
/// y <= u sqrt(|N| / (2(t-1))) for N < 0 and y <= u sqrt(N / (2(t+1))) for N > 0,
/// with (t, u) the fundamental unit. Returned floored, so the boundary is included.
inline Integer class_bound(const PellianProblem& prob, const PellUnit& unit)
{
    const Integer num = unit.u * unit.u * abs(prob.N);
    const Integer den = prob.N < 0 ? Integer(2 * (unit.t - 1)) : Integer(2 * (unit.t + 1));
    return isqrt(num / den);
}

inline Integer class_bound(const PellianProblem& prob)
{
    return class_bound(prob, pell_fundamental(prob.D));
}

/// Largest y with y^2 <= |N| (u1 sqrt(D) + 1) / (2D), where (t1, u1) solves
/// t^2 - D u^2 = -1. Each orbit of {norm N} u {norm -N} under the units has a
/// member (up to sign and conjugation) inside this range.
inline Integer norm_minus_one_bound(const Integer& D, const Integer& abs_n, const PellUnit& neg)
{
    auto inside = [&](const Integer& y) {
        const Integer lhs = 2 * D * y * y - abs_n;
        if (lhs <= 0)
            return true;
        return lhs * lhs <= abs_n * abs_n * neg.u * neg.u * D;
    };
    Integer lo = 0;
    Integer hi = isqrt(abs_n * (neg.u * (isqrt(D) + 1) + 1) / (2 * D)) + 2;
    while (inside(hi))
        hi *= 2;
    // invariant: inside(lo), !inside(hi)
    while (hi - lo > 1) {
        Integer mid = (lo + hi) / 2;
        if (inside(mid))
            lo = std::move(mid);
        else
            hi = std::move(mid);
    }
    return lo;
}

// ---------------------------------------------------------------------------
// Solvers

/// All (x, y) with 0 <= y <= y_max and x >= 0, by testing N + D y^2 directly.
inline std::vector<Solution> solve_brute(const PellianProblem& prob, const Integer& y_max)
{
    std::vector<Solution> out;
    if (y_max < 0)
        return out;
    detail::scan_square_values(prob.D, prob.N, Integer(0), y_max,
                               [&](const Integer& x, const Integer& y) { out.push_back({x, y}); });
    return out;
}

namespace detail {

inline std::vector<Solution> enumerate_range(const Integer& D, const Integer& N, const Integer& y_lo,
                                             const Integer& y_hi)
{
    std::vector<Solution> out;
    if (y_lo > y_hi)
        return out;
    Integer value = N + D * y_lo * y_lo;
    Integer inc = D * (2 * y_lo + 1);
    const Integer step = 2 * D;
    for (Integer y = y_lo; y <= y_hi; ++y) {
        if (auto x = is_perfect_square(value))
            out.push_back({std::move(*x), y});
        value += inc;
        inc += step;
    }
    return out;
}

inline Integer start_for(const Integer& D, const Integer& N)
{
    if (N >= 0)
        return 0;
    Integer y = isqrt(-N / D);
    while (D * y * y + N < 0)
        ++y;
    return y;
}

}  // namespace detail

/// Certified decision by enumerating every class representative.
///
/// With a norm -1 unit eps1 available, representatives of norm N and -N are
/// searched up to norm_minus_one_bound and the latter are mapped through eps1.
/// Otherwise the search runs to class_bound for N alone.
inline PellianOutcome solve_complete(const PellianProblem& prob)
{
    const Integer& D = prob.D;
    const Integer& N = prob.N;
    std::vector<Solution> found;
    Integer bound;
    std::string note;

    if (auto neg = negative_pell_fundamental(D)) {
        bound = norm_minus_one_bound(D, abs(N), *neg);
        found = detail::enumerate_range(D, N, detail::start_for(D, N), bound);
        for (const Solution& s : detail::enumerate_range(D, Integer(-N), detail::start_for(D, Integer(-N)), bound)) {
            // (x + y sqrt D)(t1 + u1 sqrt D) has norm (-N)(-1) = N
            found.push_back({s.x * neg->t + D * s.y * neg->u, s.x * neg->u + s.y * neg->t});
        }
        note = "searched norms N and -N for y <= " + bound.str() + " using the norm -1 unit (" + neg->t.str() +
               ", " + neg->u.str() + ")";
    } else {
        const PellUnit unit = pell_fundamental(D);
        bound = class_bound(prob, unit);
        found = detail::enumerate_range(D, N, detail::start_for(D, N), bound);
        note = "searched y <= " + bound.str() + " (class bound from unit (" + unit.t.str() + ", " + unit.u.str() +
               "))";
    }

    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    for (const Solution& s : found)
        if (!prob.satisfied_by(s.x, s.y))
            throw std::logic_error("solve_complete: produced a non-solution");

    const Verdict v = found.empty() ? Verdict::unsolvable : Verdict::solvable;
    return {prob, v, std::move(found), Method::bounded_enumeration, std::move(bound), std::move(note)};
}

// ---------------------------------------------------------------------------
// Fujita: X^2 - (K^2 + 1) Y^2 = N has no primitive solution when 1 < |N| <= K.

struct FujitaCertificate {
    Integer K;
    Integer N;
};

inline std::optional<FujitaCertificate> fujita_fast_path(const Integer& K, const Integer& N)
{
    if (K <= 0)
        throw std::invalid_argument("fujita_fast_path: K must be positive");
    const Integer a = abs(N);
    if (a > 1 && a <= K)
        return FujitaCertificate{K, N};
    return std::nullopt;
}

/// True when x^2 - D y^2 = N has a solution modulo m.
inline bool solvable_mod(const Integer& D, const Integer& N, unsigned m)
{
    const auto d = static_cast<unsigned>(floor_mod(D, m));
    const auto n = static_cast<unsigned>(floor_mod(N, m));
    for (unsigned x = 0; x < m; ++x)
        for (unsigned y = 0; y < m; ++y)
            if ((x * x + (m - d) * ((y * y) % m)) % m == n)
                return true;
    return false;
}

namespace detail {

/// Certificates showing x^2 - (K^2+1) y^2 = -p^e has no solution at all:
/// any solution has gcd p^i with 2i < e, and the reduced equation with
/// exponent e - 2i is excluded by Fujita as long as 1 < p^(e-2i) <= K.
inline std::vector<FujitaCertificate> gcd_reduced_fujita(const Integer& p, const Integer& K, unsigned e)
{
    std::vector<FujitaCertificate> certs;
    for (unsigned reduced = e;; reduced -= 2) {
        auto cert = fujita_fast_path(K, Integer(-ipow(p, reduced)));
        if (!cert)
            throw std::logic_error("Fujita hypothesis fails for exponent " + std::to_string(reduced));
        certs.push_back(std::move(*cert));
        if (reduced < 2)
            break;
    }
    return certs;
}

inline std::string describe(const std::vector<FujitaCertificate>& certs)
{
    std::string out;
    for (const auto& c : certs) {
        if (!out.empty())
            out += "; ";
        out += "no primitive solution for N=" + c.N.str() + " (1<|N|<=K=" + c.K.str() + ")";
    }
    return out;
}

inline void require_odd_prime(const Integer& p, const char* who)
{
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument(std::string(who) + ": p = " + p.str() + " is not an odd prime");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// x^2 - (p^(2k+2) + 1) y^2 = -p^(2l+1)

inline PellianProblem family_problem(const Integer& p, unsigned k, unsigned l)
{
    return {ipow(p, 2 * k + 2) + 1, Integer(-ipow(p, 2 * l + 1))};
}

struct Case2Hit {
    Integer r;
    Integer u;
    unsigned t;
    int sign;
};

/// Exhaustive search for u^2 - r^2 +- 2ru p^(k+1) = p^(2k-2t+1) over coprime
/// r, u >= 0 with ru < p^k, both signs and every t with 0 <= t <= k.
///
/// The left side is evaluated through lemma_db_value on the expansion of
/// sqrt(p^(2k+2)+1) at index 0; odd indices give the same value set with r and
/// u exchanged, so index 0 is exhaustive.
inline std::vector<Case2Hit> case2_residue_search(const Integer& p, unsigned k)
{
    detail::require_odd_prime(p, "case2_residue_search");
    const Integer K = ipow(p, k + 1);
    const Integer D = K * K + 1;
    const CFExpansion exp = lemma_db_expansion(D, 1);
    if (exp.s(2) != K || exp.t(1) != 1 || exp.t(2) != 1)
        throw std::logic_error("case2_residue_search: unexpected expansion of sqrt(p^(2k+2)+1)");

    std::vector<std::pair<Integer, unsigned>> targets;  // p^(2k-2t+1), t
    for (unsigned t = 0; t <= k; ++t)
        targets.emplace_back(ipow(p, 2 * k - 2 * t + 1), t);

    const Integer limit = ipow(p, k);
    std::vector<std::pair<Integer, Integer>> pairs{{1, 0}, {0, 1}};
    for (Integer r = 1; r < limit; ++r)
        for (Integer u = 1; r * u < limit; ++u)
            if (gcd(r, u) == 1)
                pairs.emplace_back(r, u);

    std::vector<Case2Hit> hits;
    for (const auto& [r, u] : pairs) {
        for (int sign : {+1, -1}) {
            const Integer value = lemma_db_value(exp, 0, r, sign * u);
            for (const auto& [target, t] : targets)
                if (value == target)
                    hits.push_back({r, u, t, sign});
        }
    }
    return hits;
}

/// Decides x^2 - (p^(2k+2)+1) y^2 = -p^(2l+1) by the three-case argument:
///   2l+1 <= k+1  : Fujita after removing gcd powers of p        (fujita)
///   l = k        : residue search, Fujita for t >= k/2, small y  (residue)
///   k/2 < l < k  : scale by p^(k-l) into the l = k case          (descent)
/// The verdict is then confirmed by solve_complete; any disagreement throws.
inline PellianOutcome decide_paper_equation(const Integer& p, unsigned k, unsigned l)
{
    detail::require_odd_prime(p, "decide_paper_equation");
    if (l > k)
        throw std::invalid_argument("decide_paper_equation: need 0 <= l <= k");

    const PellianProblem prob = family_problem(p, k, l);
    const Integer K = ipow(p, k + 1);
    Method method;
    std::string cert;

    if (2 * l + 1 <= k + 1) {
        method = Method::fujita;
        cert = "case 1: " + detail::describe(detail::gcd_reduced_fujita(p, K, 2 * l + 1));
    } else if (l == k) {
        method = Method::residue;
        const auto hits = case2_residue_search(p, k);
        if (!hits.empty())
            throw consistency_error("case 2: residue search found " + std::to_string(hits.size()) + " assignments");
        // exponents 2k-2t+1 <= k+1
        std::vector<FujitaCertificate> reduced;
        for (unsigned t = 0; t <= k; ++t) {
            const unsigned e = 2 * k - 2 * t + 1;
            if (e <= k + 1) {
                auto c = detail::gcd_reduced_fujita(p, K, e);
                reduced.insert(reduced.end(), c.begin(), c.end());
            }
        }
        // y < p^((2k+1)/2)  <=>  y^2 < p^(2k+1)
        const Integer small_y = isqrt(ipow(p, 2 * k + 1) - 1);
        if (!solve_brute(prob, small_y).empty())
            throw consistency_error("case 2: solution below p^((2k+1)/2)");
        cert = "case 2: no (r,u) with ru<" + ipow(p, k).str() +
               " satisfies the residue equation; y<=" + small_y.str() + " enumerated";
        if (!reduced.empty())
            cert += "; " + detail::describe(reduced);
    } else {
        method = Method::descent;
        const PellianOutcome top = decide_paper_equation(p, k, k);
        cert = "case 3: a solution times p^" + std::to_string(k - l) + " solves the l=k equation, which is " +
               std::string(to_string(top.verdict)) + " (" + std::string(to_string(top.method)) + ")";
    }

    PellianOutcome check = solve_complete(prob);
    if (check.verdict != Verdict::unsolvable)
        throw consistency_error("decide_paper_equation: enumeration found a solution for p=" + p.str());
    return {prob, Verdict::unsolvable, {}, method, std::move(check.search_bound_used), std::move(cert)};
}

// ---------------------------------------------------------------------------
// p = 2

inline Solution p2_family(unsigned k, unsigned l)
{
    if (k % 2 == 0 || 2 * l <= k || l > k)
        throw std::invalid_argument("p2_family: need k odd and k/2 < l <= k");
    const Integer scale = ipow(2, (2 * l - k - 1) / 2);
    return {scale * (ipow(2, k + 1) - 1), scale};
}

inline PellianOutcome p2_decide(unsigned k, unsigned l)
{
    if (l > k)
        throw std::invalid_argument("p2_decide: need 0 <= l <= k");
    const PellianProblem prob = family_problem(2, k, l);

    PellianOutcome out{prob, Verdict::unsolvable, {}, Method::residue, 0, {}};
    if (k % 2 == 0) {
        if (solvable_mod(prob.D, prob.N, 5))
            throw consistency_error("p2_decide: expected an obstruction modulo 5");
        out.certificate = "not solvable modulo 5";
    } else if (2 * l > k) {
        Solution w = p2_family(k, l);
        if (!prob.satisfied_by(w.x, w.y))
            throw consistency_error("p2_decide: family witness fails");
        out.verdict = Verdict::solvable;
        out.method = Method::paper_family;
        out.witnesses.push_back(std::move(w));
        out.certificate = "explicit family member";
    } else {
        out.method = Method::fujita;
        out.certificate = detail::describe(detail::gcd_reduced_fujita(2, ipow(2, k + 1), 2 * l + 1));
    }

    PellianOutcome check = solve_complete(prob);
    if (check.verdict != out.verdict)
        throw consistency_error("p2_decide: enumeration disagrees for k=" + std::to_string(k) +
                                ", l=" + std::to_string(l));
    out.search_bound_used = std::move(check.search_bound_used);
    return out;
}

// ---------------------------------------------------------------------------
// Solution streams

/// The first `count` solutions with x, y > 0, by increasing y.
///
/// Every positive solution is (|x|, |y|) of w eps^j or conj(w) eps^j for a
/// representative w from solve_complete and j >= 0, eps the fundamental unit.
inline std::vector<Solution> all_solutions_stream(const PellianProblem& prob, std::size_t count)
{
    const PellianOutcome base = solve_complete(prob);
    if (base.verdict != Verdict::solvable)
        throw std::invalid_argument("all_solutions_stream: equation is not solvable");
    const PellUnit eps = pell_fundamental(prob.D);
    const Integer& D = prob.D;

    std::vector<Solution> seeds;
    for (const Solution& w : base.witnesses) {
        seeds.push_back(w);
        seeds.push_back({w.x, Integer(-w.y)});
    }

    Integer limit = 1;
    for (const Solution& w : base.witnesses)
        limit = std::max(limit, w.y);

    for (;;) {
        std::set<Solution> collected;
        for (const Solution& seed : seeds) {
            Integer x = seed.x, y = seed.y;
            Integer prev_abs_y = abs(y);
            for (bool first = true;; first = false) {
                const Integer ay = abs(y);
                if (!first && ay > limit && ay > prev_abs_y)
                    break;
                if (x != 0 && y != 0 && ay <= limit)
                    collected.insert({abs(x), ay});
                prev_abs_y = ay;
                Integer nx = x * eps.t + D * y * eps.u;
                Integer ny = x * eps.u + y * eps.t;
                x = std::move(nx);
                y = std::move(ny);
            }
        }
        if (collected.size() >= count) {
            std::vector<Solution> out(collected.begin(), collected.end());
            out.resize(count);
            for (const Solution& s : out)
                if (!prob.satisfied_by(s.x, s.y))
                    throw std::logic_error("all_solutions_stream: composed a non-solution");
            return out;
        }
        limit *= 4;
    }
}

// ---------------------------------------------------------------------------

/// For real x = sqrt(D y^2 - p^(2k+1)) with D = p^(2k+2)+1, whether
/// sqrt(D) + x/y > 2 p^(k+1), decided exactly. Requires y^2 >= p^(2k+1).
inline bool lemma_gap_inequality_holds(const Integer& p, unsigned k, const Integer& y)
{
    const Integer P = ipow(p, 2 * k + 1);
    if (y <= 0 || y * y < P)
        throw std::invalid_argument("lemma_gap_inequality_holds: need y^2 >= p^(2k+1)");
    const Integer K = ipow(p, k + 1);
    const Integer D = K * K + 1;
    // sqrt(A) + sqrt(B) > C with A = D y^2, B = D y^2 - P, C = 2 K y
    const Integer A = D * y * y;
    const Integer B = A - P;
    const Integer C = 2 * K * y;
    if (A >= C * C)
        return true;
    // sqrt(B) > C - sqrt(A) > 0  <=>  2 C sqrt(A) > C^2 + A - B
    const Integer R = C * C + A - B;
    if (R < 0)
        return true;
    return 4 * C * C * A > R * R;
}

}  // namespace pellkit
