#pragma once

// Arithmetic in Z[sqrt(-t)] and Diophantine D(n)-tuples over it.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pellkit/arith.hpp"
#include "pellkit/pellian.hpp"

namespace pellkit {

/// re + im * sqrt(-t). t = 0 stands for the integers themselves (im = 0).
struct RingElem {
    Integer re;
    Integer im;
    Integer t;

    RingElem(Integer re_, Integer im_, Integer t_) : re(std::move(re_)), im(std::move(im_)), t(std::move(t_))
    {
        if (t < 0)
            throw std::invalid_argument("ring element: t must be nonnegative");
        if (t == 0 && im != 0)
            throw std::invalid_argument("ring element: t = 0 admits only integers");
    }

    static RingElem integer(Integer value, Integer t) { return {std::move(value), 0, std::move(t)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_integer() const { return im == 0; }

    std::string str() const
    {
        if (im == 0)
            return re.str();
        std::string out = re == 0 ? "" : re.str();
        if (im > 0 && re != 0)
            out += "+";
        return out + im.str() + "*w";
    }

    friend bool operator==(const RingElem&, const RingElem&) = default;
};

/// Reads "a", "a+b*w", "a-b*w", "b*w", "-w" and the like, w = sqrt(-t).
inline RingElem parse_ring_elem(std::string_view text, const Integer& t)
{
    std::string s;
    for (char ch : text)
        if (ch != ' ')
            s += ch;
    if (s.empty())
        throw std::invalid_argument("empty ring element");
    if (s.back() != 'w') {
        if (s.find('w') != std::string::npos)
            throw std::invalid_argument("bad ring element '" + std::string(text) + "'");
        return RingElem::integer(parse_integer(s), t);
    }
    s.pop_back();
    const bool starred = !s.empty() && s.back() == '*';
    if (starred)
        s.pop_back();
    const auto split = s.find_last_of("+-");
    const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string coef = split == std::string::npos ? s : s.substr(split);
    if (starred && (coef.empty() || coef == "+" || coef == "-"))
        throw std::invalid_argument("bad ring element '" + std::string(text) + "'");
    if (coef.empty() || coef == "+" || coef == "-")
        coef += "1";
    return {re_part.empty() ? Integer(0) : parse_integer(re_part), parse_integer(coef), t};
}

namespace detail {

inline void require_same_ring(const RingElem& a, const RingElem& b)
{
    if (a.t != b.t)
        throw std::invalid_argument("ring arithmetic: mixed t (" + a.t.str() + " vs " + b.t.str() + ")");
}

}  // namespace detail

inline RingElem ring_mul(const RingElem& a, const RingElem& b)
{
    detail::require_same_ring(a, b);
    return {a.re * b.re - a.t * a.im * b.im, a.re * b.im + a.im * b.re, a.t};
}

inline RingElem operator*(const RingElem& a, const RingElem& b) { return ring_mul(a, b); }

inline RingElem operator+(const RingElem& a, const RingElem& b)
{
    detail::require_same_ring(a, b);
    return {a.re + b.re, a.im + b.im, a.t};
}

inline RingElem operator-(const RingElem& a, const RingElem& b)
{
    detail::require_same_ring(a, b);
    return {a.re - b.re, a.im - b.im, a.t};
}

/// Square roots of z, one per +-pair, canonical: re > 0, or re = 0 and im > 0.
/// Z[sqrt(-t)] is an integral domain, so the list has at most one entry.
///
/// For im != 0, w = x + y sqrt(-t) with x^2 - t y^2 = re and 2xy = im gives
/// x^2 = (re + sqrt(re^2 + t im^2)) / 2.
inline std::vector<RingElem> sqrt_in_ring(const RingElem& z)
{
    const Integer& t = z.t;
    if (z.is_zero())
        return {RingElem(0, 0, t)};

    if (z.im == 0) {
        if (z.re > 0) {
            if (auto r = is_perfect_square(z.re))
                return {RingElem(*r, 0, t)};
            return {};
        }
        // x = 0 branch: re = -t y^2
        if (t == 0 || (-z.re) % t != 0)
            return {};
        if (auto y = is_perfect_square(-z.re / t))
            return {RingElem(0, *y, t)};
        return {};
    }

    if (z.im % 2 != 0)
        return {};
    const Integer h = z.im / 2;
    const auto disc_root = is_perfect_square(z.re * z.re + 4 * t * h * h);
    if (!disc_root)
        return {};
    const Integer twice_x2 = z.re + *disc_root;
    if (twice_x2 % 2 != 0)
        return {};
    const auto x = is_perfect_square(twice_x2 / 2);
    if (!x || *x == 0 || h % *x != 0)
        return {};
    RingElem w(*x, h / *x, t);
    if (ring_mul(w, w) != z)
        return {};
    return {w};
}

// ---------------------------------------------------------------------------
// D(n)-tuples

struct PairWitness {
    std::size_t i;
    std::size_t j;
    RingElem root;
};

struct TupleReport {
    std::vector<RingElem> elements;
    Integer n;
    Integer t;
    std::vector<PairWitness> witnesses;
    std::optional<std::pair<std::size_t, std::size_t>> failing_pair;

    bool verified() const { return !failing_pair.has_value(); }
};

/// Checks that a_i a_j + n is a square in the ring for every pair i < j.
/// Elements must be nonzero, pairwise distinct and share one t.
inline TupleReport check_tuple(std::span<const RingElem> elements, const Integer& n)
{
    if (elements.size() < 2)
        throw std::invalid_argument("check_tuple: need at least two elements");
    const Integer& t = elements.front().t;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].t != t)
            throw std::invalid_argument("check_tuple: elements from different rings");
        if (elements[i].is_zero())
            throw std::invalid_argument("check_tuple: zero element");
        for (std::size_t j = 0; j < i; ++j)
            if (elements[j] == elements[i])
                throw std::invalid_argument("check_tuple: duplicate element " + elements[i].str());
    }

    TupleReport report{{elements.begin(), elements.end()}, n, t, {}, std::nullopt};
    const RingElem shift = RingElem::integer(n, t);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (std::size_t j = i + 1; j < elements.size(); ++j) {
            auto roots = sqrt_in_ring(elements[i] * elements[j] + shift);
            if (roots.empty()) {
                report.failing_pair = {i, j};
                return report;
            }
            report.witnesses.push_back({i, j, std::move(roots.front())});
        }
    }
    return report;
}

inline TupleReport check_tuple(std::span<const Integer> values, const Integer& n, const Integer& t)
{
    std::vector<RingElem> elements;
    elements.reserve(values.size());
    for (const Integer& v : values)
        elements.push_back(RingElem::integer(v, t));
    return check_tuple(elements, n);
}

// ---------------------------------------------------------------------------
// Triple extension data: for a D(l)-triple {a, b, c} with ab+l = r^2,
// ac+l = s^2, bc+l = t^2 put e = l(a+b+c) + 2abc - 2rst, x = at - rs,
// y = bs - rt, z = cr - st. Then ae+l^2 = x^2, be+l^2 = y^2, ce+l^2 = z^2 and
// c = a + b + e/l + 2(abe + rxy)/l^2.

struct ExtensionData {
    Integer e;
    Integer x;
    Integer y;
    Integer z;
};

inline ExtensionData lemma3_extend_data(const Integer& a, const Integer& b, const Integer& c, const Integer& l,
                                        const Integer& r, const Integer& s, const Integer& t)
{
    if (l == 0)
        throw std::invalid_argument("lemma3_extend_data: l must be nonzero");
    if (a * b + l != r * r || a * c + l != s * s || b * c + l != t * t)
        throw std::invalid_argument("lemma3_extend_data: (r, s, t) are not the pair roots of the triple");

    ExtensionData out{l * (a + b + c) + 2 * a * b * c - 2 * r * s * t, a * t - r * s, b * s - r * t, c * r - s * t};
    const Integer l2 = l * l;
    if (a * out.e + l2 != out.x * out.x || b * out.e + l2 != out.y * out.y || c * out.e + l2 != out.z * out.z)
        throw std::logic_error("lemma3_extend_data: square identities fail");
    // c l^2 = (a + b) l^2 + e l + 2(abe + rxy)
    if (c * l2 != (a + b) * l2 + out.e * l + 2 * (a * b * out.e + r * out.x * out.y))
        throw std::logic_error("lemma3_extend_data: closed form for c fails");
    return out;
}

// ---------------------------------------------------------------------------
// Quadruples {1, n^2+1, -c, d} in Z[sqrt(-n^2)]

struct PropFamilyMember {
    int sign = +1;
    Integer d;
    bool degenerate = false;
    std::string degenerate_reason;
    std::optional<TupleReport> report;      // in Z[sqrt(-n^2)]
    std::optional<TupleReport> report_sub;  // in Z[sqrt(-m^2)]
    std::vector<RingElem> closed_form_roots;
    bool closed_forms_hold = false;

    bool verified() const
    {
        return !degenerate && report && report->verified() && report_sub && report_sub->verified() &&
               closed_forms_hold;
    }
};

struct PropFamilyResult {
    Integer n;
    std::size_t j;
    Integer m;
    Integer b;
    Integer x;  // y^2 - (n^2+1) x^2 = -1
    Integer y;
    Integer c;
    PropFamilyMember plus;
    PropFamilyMember minus;
};

/// The j-th member of the family: (x_j, y_j) is the j-th positive solution of
/// y^2 - (n^2+1) x^2 = -1, c = n^2 x^2 - 1 and
/// d = +-2 n^3 x y + (2n^2+1) c + n^2 + 2.
inline PropFamilyResult prop_family(const Integer& n, std::size_t j, const Integer& m)
{
    if (n < 1 || m < 1 || j < 1)
        throw std::invalid_argument("prop_family: n, m, j must be positive");
    if (n % m != 0)
        throw std::invalid_argument("prop_family: m = " + m.str() + " does not divide n = " + n.str());

    const Integer n2 = n * n;
    const Integer b = n2 + 1;
    const auto sols = all_solutions_stream(PellianProblem(b, -1), j);
    const Integer x = sols[j - 1].y;
    const Integer y = sols[j - 1].x;
    const Integer c = n2 * x * x - 1;

    PropFamilyResult out{n, j, m, b, x, y, c, {}, {}};
    const Integer t_full = n2;
    const Integer t_sub = m * m;

    for (int sign : {+1, -1}) {
        PropFamilyMember& member = sign > 0 ? out.plus : out.minus;
        member.sign = sign;
        member.d = sign * 2 * n2 * n * x * y + (2 * n2 + 1) * c + n2 + 2;
        const Integer& d = member.d;

        member.closed_form_roots = {
            RingElem::integer(n2 * x + sign * n * y, t_full),
            RingElem::integer(n * b * x + sign * n2 * y, t_full),
            RingElem(0, c + sign * n * x * y, t_full),
        };
        const std::array<RingElem, 3> targets{
            RingElem::integer(d - 1, t_full),
            RingElem::integer(b * d - 1, t_full),
            RingElem::integer(-c * d - 1, t_full),
        };
        member.closed_forms_hold = true;
        for (std::size_t i = 0; i < 3; ++i)
            member.closed_forms_hold =
                member.closed_forms_hold && member.closed_form_roots[i] * member.closed_form_roots[i] == targets[i];

        if (c == 0) {
            member.degenerate = true;
            member.degenerate_reason = "c = 0";
        } else if (d == 0) {
            member.degenerate = true;
            member.degenerate_reason = "d = 0";
        } else if (d == 1 || d == b || d == -c) {
            member.degenerate = true;
            member.degenerate_reason = "d = " + d.str() + " repeats an element";
        }
        if (member.degenerate)
            continue;

        const std::array<Integer, 4> values{1, b, Integer(-c), d};
        member.report = check_tuple(values, -1, t_full);
        member.report_sub = check_tuple(values, -1, t_sub);
    }
    return out;
}

// ---------------------------------------------------------------------------
// 2 p^k = q^(2^l) + 1

struct AdmissiblePair {
    Integer p;
    unsigned k;
    Integer q;
    unsigned l_exp;
    friend bool operator==(const AdmissiblePair&, const AdmissiblePair&) = default;
};

inline bool is_admissible(const AdmissiblePair& a)
{
    return a.l_exp >= 1 && a.p % 2 == 1 && a.q % 2 == 1 && is_prime(a.p) && is_prime(a.q) &&
           2 * ipow(a.p, a.k) == ipow(a.q, 1u << a.l_exp) + 1;
}

/// Every (p, k, q, l) with p <= limit an odd prime, k in {1, 2, 4}, q an odd
/// prime and 2 p^k = q^(2^l) + 1, ordered by (k, p).
inline std::vector<AdmissiblePair> find_admissible_pairs(const Integer& limit)
{
    std::vector<AdmissiblePair> out;
    for (unsigned k : {1u, 2u, 4u}) {
        for (Integer p = 3; p <= limit; p += 2) {
            if (!is_prime(p))
                continue;
            Integer v = 2 * ipow(p, k) - 1;
            for (unsigned l = 1;; ++l) {
                auto root = is_perfect_square(v);
                if (!root || *root < 3)
                    break;
                v = std::move(*root);
                if (v % 2 == 1 && is_prime(v))
                    out.push_back({p, k, v, l});
            }
        }
    }
    return out;
}

/// x^2 - b y^2 = (1 - b)/t, whose solvability gates a negative third element
/// of the D(-1)-triple {1, b, c}.
inline PellianProblem remark2_reduction(const Integer& b, const Integer& t)
{
    if (t < 1)
        throw std::invalid_argument("remark2_reduction: t must be positive");
    if ((b - 1) % t != 0)
        throw std::invalid_argument("remark2_reduction: t = " + t.str() + " does not divide b - 1");
    return {b, Integer((1 - b) / t)};
}

enum class TupleExistence { exists_infinite, none, undecided_by_paper };

inline std::string_view to_string(TupleExistence e)
{
    switch (e) {
    case TupleExistence::exists_infinite: return "EXISTS_INFINITE";
    case TupleExistence::none: return "NONE";
    case TupleExistence::undecided_by_paper: return "UNDECIDED_BY_PAPER";
    }
    return "?";
}

struct Classification {
    TupleExistence kind;
    std::string reason;
    std::optional<PropFamilyResult> witness;
    std::optional<PellianOutcome> certificate;
};

/// Existence of D(-1)-quadruples {1, 2p^k, c, d} in Z[sqrt(-t)]:
///   t even                          -> none
///   t = q^e, e even, e <= 2^l       -> infinitely many, witness from prop_family
///   t = q^e, e odd,  e <  2^l       -> none, x^2 - b y^2 = (1-b)/t unsolvable
///   anything else                   -> not covered
inline Classification theorem3_classify(const AdmissiblePair& pair, const Integer& t)
{
    if (!is_admissible(pair))
        throw std::invalid_argument("theorem3_classify: 2p^k = q^(2^l) + 1 fails for the given primes");
    if (t < 1)
        throw std::invalid_argument("theorem3_classify: t must be positive");

    const Integer b = 2 * ipow(pair.p, pair.k);
    const unsigned top = 1u << pair.l_exp;  // b - 1 = q^top

    if (t % 2 == 0)
        return {TupleExistence::none,
                "t even: t does not divide b-1 = " + Integer(b - 1).str() +
                    ", so c, d > 0 and no integer D(-1)-quadruple extends {1, b}",
                std::nullopt, std::nullopt};

    Integer rest = t;
    unsigned e = 0;
    while (rest % pair.q == 0) {
        rest /= pair.q;
        ++e;
    }
    if (rest != 1 || e > top)
        return {TupleExistence::undecided_by_paper, "t is not a power q^e with e <= 2^l", std::nullopt,
                std::nullopt};

    if (e % 2 == 0) {
        const Integer n = ipow(pair.q, top / 2);
        const Integer m = ipow(pair.q, e / 2);
        PropFamilyResult fam = prop_family(n, 1, m);
        if (!fam.plus.verified())
            throw consistency_error("theorem3_classify: family witness does not verify");
        return {TupleExistence::exists_infinite,
                "t = q^" + std::to_string(e) + " = m^2 with m | n = q^" + std::to_string(top / 2), std::move(fam),
                std::nullopt};
    }

    const PellianProblem reduced = remark2_reduction(b, t);
    // x^2 - (q^(2k'+2)+1) y^2 = -q^(2l'+1) with 2k'+2 = 2^l, 2l'+1 = 2^l - e
    const unsigned k_prime = top / 2 - 1;
    const unsigned l_prime = (top - e - 1) / 2;
    PellianOutcome cert = decide_paper_equation(pair.q, k_prime, l_prime);
    if (!(cert.problem == reduced))
        throw std::logic_error("theorem3_classify: reduction does not match the decided equation");
    return {TupleExistence::none,
            "t = q^" + std::to_string(e) + " odd power: " + reduced.N.str() + " is not a norm, so c, d > 0",
            std::nullopt, std::move(cert)};
}

// ---------------------------------------------------------------------------
// Integer D(-1)-quadruples {1, b, c, d}

/// All c in (1, c_max], c != b, with c - 1 and bc - 1 both squares.
inline std::vector<Integer> d_minus_one_triple_thirds(const Integer& b, const Integer& c_max)
{
    std::vector<Integer> out;
    for (Integer x = 1;; ++x) {
        const Integer c = x * x + 1;
        if (c > c_max)
            break;
        if (c != b && is_perfect_square(b * c - 1))
            out.push_back(c);
    }
    return out;
}

/// Exhaustive search for integer D(-1)-quadruples {1, b, c, d}, 1 < c < d <= c_max.
inline std::vector<std::array<Integer, 4>> integer_quadruple_search(const Integer& b, const Integer& c_max)
{
    if (b < 2 || !is_perfect_square(b - 1))
        throw std::invalid_argument("integer_quadruple_search: b - 1 must be a square");
    const auto thirds = d_minus_one_triple_thirds(b, c_max);
    std::vector<std::array<Integer, 4>> out;
    for (std::size_t i = 0; i < thirds.size(); ++i)
        for (std::size_t j = i + 1; j < thirds.size(); ++j)
            if (is_perfect_square(thirds[i] * thirds[j] - 1))
                out.push_back({1, b, thirds[i], thirds[j]});
    return out;
}

}  // namespace pellkit
