#pragma once

// Claim sweeps: each claim expands a SweepConfig into independent cases and
// maps every case to an evidence record {"input": ..., "ok": ..., ...}.
// Records depend on the input alone, so any record can be replayed.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pellkit/harness/json.hpp"
#include "pellkit/harness/sweep.hpp"

namespace pellkit::harness {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ClaimStatus { confirmed, violated, partial };

inline std::string_view to_string(ClaimStatus s)
{
    switch (s) {
    case ClaimStatus::confirmed: return "CONFIRMED";
    case ClaimStatus::violated: return "VIOLATED";
    case ClaimStatus::partial: return "PARTIAL";
    }
    return "?";
}

struct ClaimReport {
    std::string claim_id;
    ClaimStatus status = ClaimStatus::confirmed;
    json config;
    double elapsed_seconds = 0;
    std::vector<json> evidence;

    json to_json() const
    {
        return {{"claim_id", claim_id},
                {"status", to_string(status)},
                {"config", config},
                {"header", {{"elapsed", elapsed_seconds}, {"version", kVersion}}},
                {"evidence", evidence}};
    }
};

struct Claim {
    std::string id;
    std::string summary;
    std::function<std::vector<json>(const SweepConfig&)> cases;
    std::function<json(const json&)> run;
};

namespace detail {

inline std::vector<unsigned> odd_primes_upto(unsigned n)
{
    std::vector<unsigned> out;
    for (unsigned p = 3; p <= n; p += 2)
        if (is_prime(Integer(p)))
            out.push_back(p);
    return out;
}

/// p^k with p an odd prime and k >= 1, or empty.
inline std::optional<std::pair<Integer, unsigned>> odd_prime_power(const Integer& n)
{
    if (n < 3 || n % 2 == 0)
        return std::nullopt;
    Integer p = 3;
    while (p * p <= n && n % p != 0)
        p += 2;
    if (n % p != 0)
        p = n;
    Integer rest = n;
    unsigned k = 0;
    while (rest % p == 0) {
        rest /= p;
        ++k;
    }
    if (rest != 1)
        return std::nullopt;
    return std::pair{p, k};
}

/// Which of b = p, b = 2p^k, r = p^k, r = 2p^k hold for b = r^2 + 1.
inline std::vector<std::string> fifumi_forms(const Integer& r)
{
    const Integer b = r * r + 1;
    std::vector<std::string> forms;
    if (b % 2 == 1 && is_prime(b))
        forms.emplace_back("b=p");
    if (b % 2 == 0 && odd_prime_power(b / 2))
        forms.emplace_back("b=2p^k");
    if (odd_prime_power(r))
        forms.emplace_back("r=p^k");
    if (r % 2 == 0 && odd_prime_power(r / 2))
        forms.emplace_back("r=2p^k");
    return forms;
}

// splitmix64: a fixed generator so cases are identical on every platform
struct CaseRng {
    std::uint64_t state;
    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::int64_t uniform(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

inline bool is_square_i64(std::int64_t v)
{
    if (v < 0)
        return false;
    const auto r = pellkit::detail::isqrt_word(static_cast<std::uint64_t>(v));
    return r * r == static_cast<std::uint64_t>(v);
}

inline std::int64_t root_i64(std::int64_t v)
{
    return static_cast<std::int64_t>(pellkit::detail::isqrt_word(static_cast<std::uint64_t>(v)));
}

/// Exact test of |sqrt(D) - a/b| < num/(den b^2), i.e. |den a b - den b^2 sqrt(D)| < num.
inline bool good_approximation(const Integer& D, const Integer& a, const Integer& b, const Integer& num,
                               const Integer& den)
{
    const Integer lin = den * a * b;
    const Integer rad = -den * b * b;
    return sign_of_surd(lin - num, rad, D) < 0 && sign_of_surd(lin + num, rad, D) > 0;
}

inline json pairs_json(const std::vector<AdmissiblePair>& pairs)
{
    json out = json::array();
    for (const auto& a : pairs)
        out.push_back(to_json(a));
    return out;
}

// ---------------------------------------------------------------------------

inline json run_tm1(const json& in)
{
    const Integer p = integer_field(in, "p");
    const unsigned k = in.at("k"), l = in.at("l");
    const PellianOutcome o = decide_paper_equation(p, k, l);
    json rec{{"outcome", to_json(o)}};
    bool ok = o.verdict == Verdict::unsolvable;
    if (l == k) {
        const auto hits = case2_residue_search(p, k);
        rec["residue_hits"] = hits.size();
        ok = ok && hits.empty();
    }
    rec["ok"] = ok;
    return rec;
}

inline json run_p2(const json& in)
{
    const unsigned k = in.at("k"), l = in.at("l");
    const PellianOutcome o = p2_decide(k, l);
    const bool family = k % 2 == 1 && 2 * l > k;
    bool ok = o.verdict == (family ? Verdict::solvable : Verdict::unsolvable);
    if (k % 2 == 0)
        ok = ok && o.method == Method::residue && o.certificate == "not solvable modulo 5";
    if (family)
        ok = ok && !o.witnesses.empty() && o.witnesses.front() == p2_family(k, l);
    return {{"outcome", to_json(o)}, {"ok", ok}};
}

inline json run_fujita(const json& in)
{
    const Integer K = integer_field(in, "K");
    const Integer D = K * K + 1;
    json primitive = json::array();
    unsigned checked = 0, solvable = 0, certified = 0;
    for (Integer N = -K; N <= K; ++N) {
        if (abs(N) <= 1)
            continue;
        ++checked;
        if (fujita_fast_path(K, N))
            ++certified;
        const PellianOutcome o = solve_complete(PellianProblem(D, N));
        if (o.verdict == Verdict::solvable)
            ++solvable;
        for (const Solution& w : o.witnesses)
            if (gcd(w.x, w.y) == 1)
                primitive.push_back({{"N", N.str()}, {"x", w.x.str()}, {"y", w.y.str()}});
    }
    return {{"D", D.str()},
            {"checked", checked},
            {"certified", certified},
            {"solvable_non_primitive", solvable},
            {"primitive", primitive},
            {"ok", primitive.empty() && certified == checked}};
}

inline json run_dubo(const json& in)
{
    const Integer alpha = integer_field(in, "alpha"), beta = integer_field(in, "beta");
    const Integer r = integer_field(in, "r"), u = integer_field(in, "u");
    const std::size_t n = in.at("n");
    const CFExpansion exp = lemma_db_expansion(alpha, beta);
    const Integer rhs = lemma_db_value(exp, n, r, u);
    const Integer lhs = lemma_db_lhs(alpha, beta, exp, n, r, u);
    return {{"lhs", lhs.str()}, {"rhs", rhs.str()}, {"ok", lhs == rhs}};
}

inline json run_worley(const json& in)
{
    const Integer D = integer_field(in, "D");
    const Integer num = integer_field(in, "c_num"), den = integer_field(in, "c_den");
    const Integer y_max = integer_field(in, "y_max");
    const Rational c(num, den);
    const CFExpansion exp = expand(QuadIrr::sqrt_of(D));

    // convergent index whose denominator clears (2c + 2) y_max, plus slack
    const Integer reach = (2 * num / den + 3) * y_max;
    long m_max = 0;
    {
        Integer q_prev = 0, q = 1;
        for (std::size_t m = 0;; ++m) {
            Integer q_next = exp.quotient(m) * q + q_prev;
            q_prev = std::move(q);
            q = std::move(q_next);
            if (q > reach) {
                m_max = static_cast<long>(m) + 2;
                break;
            }
        }
    }

    std::set<std::pair<Integer, Integer>> covered;
    for (const WorleyCandidate& w : worley_candidates(exp, c, m_max)) {
        if (w.b < 0)
            covered.insert({-w.a, -w.b});
        else
            covered.insert({w.a, w.b});
    }

    const Integer slack = num / den + 1;
    unsigned approximations = 0;
    json uncovered = json::array();
    for (Integer b = 1; b <= y_max; ++b) {
        const Integer centre = isqrt(D * b * b);
        for (Integer a = centre - slack; a <= centre + slack + 1; ++a) {
            if (a < 1 || gcd(a, b) != 1 || !good_approximation(D, a, b, num, den))
                continue;
            ++approximations;
            if (!covered.count({a, b}))
                uncovered.push_back({{"a", a.str()}, {"b", b.str()}});
        }
    }
    return {{"m_max", m_max},
            {"approximations", approximations},
            {"uncovered", uncovered},
            {"ok", uncovered.empty() && approximations > 0}};
}

inline json run_lemma3(const json& in)
{
    const Integer a = integer_field(in, "a"), b = integer_field(in, "b"), c = integer_field(in, "c");
    const Integer l = integer_field(in, "l");
    const Integer r = integer_field(in, "r"), s = integer_field(in, "s"), t = integer_field(in, "t");
    const ExtensionData e = lemma3_extend_data(a, b, c, l, r, s, t);
    return {{"e", e.e.str()}, {"x", e.x.str()}, {"y", e.y.str()}, {"z", e.z.str()}, {"ok", true}};
}

inline json run_prop26(const json& in)
{
    const Integer n = integer_field(in, "n"), m = integer_field(in, "m");
    const std::size_t j = in.at("j");
    const PropFamilyResult fam = prop_family(n, j, m);
    bool ok = true;
    for (const PropFamilyMember* member : {&fam.plus, &fam.minus})
        ok = ok && member->closed_forms_hold && (member->degenerate || member->verified());
    json rec = to_json(fam);
    rec["ok"] = ok;
    return rec;
}

inline json run_fifumi(const json& in)
{
    const Integer b = integer_field(in, "b");
    const Integer c_max = integer_field(in, "c_max");
    const auto thirds = d_minus_one_triple_thirds(b, c_max);
    const auto quads = integer_quadruple_search(b, c_max);
    json q = json::array();
    for (const auto& quad : quads)
        q.push_back(to_json(std::vector<Integer>(quad.begin(), quad.end())));
    return {{"thirds", to_json(thirds)}, {"quadruples", q}, {"ok", quads.empty()}};
}

inline json run_tm_ii_1(const json& in)
{
    const Integer p = integer_field(in, "p");
    const unsigned k = in.at("k");
    const unsigned t_max = in.at("t_max");
    const Integer c_max = integer_field(in, "c_max");
    const Integer b = 2 * ipow(p, k);
    json dividing = json::array();
    for (unsigned t = 2; t <= t_max; t += 2)
        if ((b - 1) % t == 0)
            dividing.push_back(t);
    const auto quads = integer_quadruple_search(b, c_max);
    return {{"b", b.str()},
            {"even_t_dividing_b_minus_1", dividing},
            {"thirds", to_json(d_minus_one_triple_thirds(b, c_max))},
            {"quadruples", quads.size()},
            {"ok", dividing.empty() && quads.empty()}};
}

inline json run_tm_ii_2(const json& in)
{
    const AdmissiblePair pair{integer_field(in, "p"), in.at("k").get<unsigned>(), integer_field(in, "q"),
                              in.at("l").get<unsigned>()};
    const Integer t = integer_field(in, "t");
    const Integer c_max = integer_field(in, "c_max");
    const Classification cls = theorem3_classify(pair, t);
    bool ok = true;
    bool in_scope = true;
    json rec;
    switch (cls.kind) {
    case TupleExistence::exists_infinite:
        ok = cls.witness && cls.witness->plus.verified() && cls.witness->m * cls.witness->m == t;
        break;
    case TupleExistence::none:
        if (cls.certificate) {
            ok = cls.certificate->verdict == Verdict::unsolvable;
        } else {
            const Integer b = 2 * ipow(pair.p, pair.k);
            const auto quads = integer_quadruple_search(b, c_max);
            rec["integer_quadruples"] = quads.size();
            ok = (b - 1) % t != 0 && quads.empty();
        }
        break;
    case TupleExistence::undecided_by_paper: in_scope = false; break;
    }
    rec["classification"] = to_json(cls);
    rec["in_scope"] = in_scope;
    rec["ok"] = ok;
    return rec;
}

/// (q, l) with 2 p^k = q^(2^l) + 1, by walking q upwards instead of taking roots.
inline std::vector<AdmissiblePair> admissible_by_search(const Integer& p)
{
    std::vector<AdmissiblePair> out;
    for (unsigned k : {1u, 2u, 4u}) {
        const Integer target = 2 * ipow(p, k);
        for (unsigned l = 1;; ++l) {
            const unsigned e = 1u << l;
            if (ipow(3, e) + 1 > target)
                break;
            for (Integer q = 3; ipow(q, e) + 1 <= target; q += 2)
                if (ipow(q, e) + 1 == target && is_prime(q))
                    out.push_back({p, k, q, l});
        }
    }
    return out;
}

inline json run_pairs(const json& in)
{
    const Integer p = integer_field(in, "p");
    std::vector<AdmissiblePair> found;
    for (const AdmissiblePair& a : find_admissible_pairs(p))
        if (a.p == p)
            found.push_back(a);
    const auto independent = admissible_by_search(p);
    bool partial = false;
    for (const auto& a : found)
        partial = partial || primality(a.p) == Primality::probable_prime || primality(a.q) == Primality::probable_prime;
    json rec{{"tuples", pairs_json(found)}, {"independent", pairs_json(independent)}, {"ok", found == independent}};
    if (partial)
        rec["partial"] = true;
    return rec;
}

// ---------------------------------------------------------------------------

inline std::vector<json> cases_tm1(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (unsigned p : odd_primes_upto(cfg.p_max))
        for (unsigned k = 0; k <= cfg.k_max; ++k)
            for (unsigned l = 0; l <= k; ++l)
                out.push_back({{"p", std::to_string(p)}, {"k", k}, {"l", l}});
    return out;
}

inline std::vector<json> cases_p2(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (unsigned k = 0; k <= cfg.k_max; ++k)
        for (unsigned l = 0; l <= k; ++l)
            out.push_back({{"k", k}, {"l", l}});
    return out;
}

inline std::vector<json> cases_fujita(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (unsigned K = 1; K <= cfg.limit; ++K)
        out.push_back({{"K", std::to_string(K)}});
    return out;
}

inline std::vector<json> cases_dubo(const SweepConfig& cfg)
{
    CaseRng rng{cfg.seed};
    std::vector<json> out;
    while (out.size() < cfg.samples) {
        const std::int64_t alpha = rng.uniform(1, 10000), beta = rng.uniform(1, 10000);
        if (is_square_i64(alpha * beta))
            continue;
        const CFExpansion exp = lemma_db_expansion(alpha, beta);
        const auto n_top = static_cast<std::int64_t>(exp.preperiod_len + exp.period_len + 5);
        out.push_back({{"alpha", std::to_string(alpha)},
                       {"beta", std::to_string(beta)},
                       {"n", rng.uniform(0, n_top)},
                       {"r", std::to_string(rng.uniform(-100, 100))},
                       {"u", std::to_string(rng.uniform(-100, 100))}});
    }
    return out;
}

inline std::vector<json> cases_worley(const SweepConfig& cfg)
{
    const std::pair<int, int> cs[] = {{1, 2}, {1, 1}, {3, 2}, {2, 1}};
    std::vector<json> out;
    for (unsigned D = 2; D <= cfg.p_max; ++D) {
        if (is_perfect_square(Integer(D)))
            continue;
        for (auto [num, den] : cs)
            out.push_back({{"D", std::to_string(D)},
                           {"c_num", std::to_string(num)},
                           {"c_den", std::to_string(den)},
                           {"y_max", std::to_string(cfg.y_max)}});
    }
    return out;
}

/// Random D(l)-triples with entries in [-1000, 1000] and random root signs.
inline std::vector<json> cases_lemma3(const SweepConfig& cfg)
{
    constexpr std::int64_t kRange = 1000;
    CaseRng rng{cfg.seed ^ 0x5bd1e995ULL};
    std::vector<json> out;
    while (out.size() < cfg.samples) {
        const std::int64_t l = (rng.next() & 1u) ? 1 : -1;
        const std::int64_t a = rng.uniform(-kRange, kRange);
        if (a == 0)
            continue;
        std::vector<std::int64_t> partners;
        for (std::int64_t x = -kRange; x <= kRange; ++x)
            if (x != 0 && x != a && is_square_i64(a * x + l))
                partners.push_back(x);
        if (partners.size() < 2)
            continue;
        const std::int64_t b = partners[rng.next() % partners.size()];
        std::vector<std::int64_t> thirds;
        for (std::int64_t x : partners)
            if (x != b && is_square_i64(b * x + l))
                thirds.push_back(x);
        if (thirds.empty())
            continue;
        const std::int64_t c = thirds[rng.next() % thirds.size()];
        auto signed_root = [&](std::int64_t v) {
            const std::int64_t r = root_i64(v);
            return (rng.next() & 1u) ? r : -r;
        };
        out.push_back({{"a", std::to_string(a)},
                       {"b", std::to_string(b)},
                       {"c", std::to_string(c)},
                       {"l", std::to_string(l)},
                       {"r", std::to_string(signed_root(a * b + l))},
                       {"s", std::to_string(signed_root(a * c + l))},
                       {"t", std::to_string(signed_root(b * c + l))}});
    }
    return out;
}

inline std::vector<json> cases_prop26(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (unsigned n = 1; n <= cfg.n_max; ++n)
        for (unsigned m = 1; m <= n; ++m)
            if (n % m == 0)
                for (unsigned j = 1; j <= cfg.j_max; ++j)
                    out.push_back({{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"j", j}});
    return out;
}

inline std::vector<json> cases_fifumi(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (unsigned r = 1; r * r + 1 <= cfg.b_max; ++r) {
        const auto forms = fifumi_forms(Integer(r));
        if (forms.empty())
            continue;
        out.push_back({{"b", std::to_string(r * r + 1)},
                       {"r", std::to_string(r)},
                       {"forms", forms},
                       {"c_max", std::to_string(cfg.c_max)}});
    }
    return out;
}

inline std::vector<json> cases_tm_ii_1(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (unsigned p : odd_primes_upto(cfg.p_max))
        for (unsigned k = 1; k <= cfg.k_max; ++k)
            if (is_perfect_square(2 * ipow(Integer(p), k) - 1))
                out.push_back({{"p", std::to_string(p)},
                               {"k", k},
                               {"t_max", cfg.t_max},
                               {"c_max", std::to_string(cfg.c_max)}});
    return out;
}

inline std::vector<json> cases_tm_ii_2(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (const AdmissiblePair& pair : find_admissible_pairs(Integer(cfg.limit))) {
        std::set<Integer> ts;
        for (unsigned t = 1; t <= cfg.t_max; ++t)
            ts.insert(t);
        for (unsigned e = 0; e <= (1u << pair.l_exp); ++e)
            ts.insert(ipow(pair.q, e));
        for (const Integer& t : ts)
            out.push_back({{"p", pair.p.str()},
                           {"k", pair.k},
                           {"q", pair.q.str()},
                           {"l", pair.l_exp},
                           {"t", t.str()},
                           {"c_max", std::to_string(cfg.c_max)}});
    }
    return out;
}

inline std::vector<json> cases_pairs(const SweepConfig& cfg)
{
    std::vector<json> out;
    for (unsigned p : odd_primes_upto(cfg.limit))
        out.push_back({{"p", std::to_string(p)}});
    return out;
}

}  // namespace detail

inline const std::vector<Claim>& claims()
{
    static const std::vector<Claim> registry{
        {"tm1", "x^2 - (p^(2k+2)+1) y^2 = -p^(2l+1) has no positive solutions (p odd prime, 0<=l<=k)",
         detail::cases_tm1, detail::run_tm1},
        {"p2-prop", "p = 2: unsolvable for k even or l <= k/2, explicit family otherwise", detail::cases_p2,
         detail::run_p2},
        {"fujita", "X^2 - (K^2+1) Y^2 = N has no primitive solution for 1 < |N| <= K", detail::cases_fujita,
         detail::run_fujita},
        {"dubo", "convergent identity for sqrt(alpha/beta) holds exactly", detail::cases_dubo, detail::run_dubo},
        {"worley", "good approximations a/b of sqrt(D) are convergent combinations with ru < 2c",
         detail::cases_worley, detail::run_worley},
        {"lemma3", "D(l)-triple extension data satisfies its square and closed-form identities",
         detail::cases_lemma3, detail::run_lemma3},
        {"prop26", "{1, n^2+1, -c_j, d_+-} are D(-1)-quadruples in Z[sqrt(-n^2)] and Z[sqrt(-m^2)]",
         detail::cases_prop26, detail::run_prop26},
        {"fifumi-desk", "{1, b} extends to no integer D(-1)-quadruple with entries <= c_max", detail::cases_fifumi,
         detail::run_fifumi},
        {"tm-ii-1-desk", "even t: no D(-1)-quadruple {1, 2p^k, c, d} (desk-scale corroboration)",
         detail::cases_tm_ii_1, detail::run_tm_ii_1},
        {"tm-ii-2", "classification of D(-1)-quadruples {1, 2p^k, c, d} in Z[sqrt(-t)] for admissible (p, q)",
         detail::cases_tm_ii_2, detail::run_tm_ii_2},
        {"pairs", "admissible (p, k, q, l) with 2p^k = q^(2^l) + 1", detail::cases_pairs, detail::run_pairs},
    };
    return registry;
}

inline const Claim* find_claim(std::string_view id)
{
    for (const Claim& c : claims())
        if (c.id == id)
            return &c;
    return nullptr;
}

/// One evidence record. Exceptions become failed records carrying the message.
inline json run_case(const Claim& claim, const json& input)
{
    json rec;
    try {
        rec = claim.run(input);
    } catch (const std::exception& e) {
        rec = {{"ok", false}, {"error", e.what()}};
    }
    rec["input"] = input;
    return rec;
}

/// Re-runs a record from its input; true when the outcome is reproduced.
inline bool replay_matches(const Claim& claim, const json& record)
{
    return run_case(claim, record.at("input")) == record;
}

/// Runs every case, reusing records from `prior` whose input matches.
/// `on_record` sees each freshly computed record as it completes.
inline ClaimReport run_claim(const Claim& claim, const SweepConfig& cfg, const std::vector<json>& prior = {},
                             const std::function<void(const json&)>& on_record = {})
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    std::map<std::string, json> reuse;
    for (const json& rec : prior)
        if (rec.contains("input"))
            reuse.emplace(rec["input"].dump(), rec);

    std::mutex sink;
    const std::vector<json> inputs = claim.cases(cfg);
    const std::function<json(const json&)> fn = [&](const json& in) {
        if (auto it = reuse.find(in.dump()); it != reuse.end())
            return it->second;
        json rec = run_case(claim, in);
        if (on_record) {
            const std::lock_guard lock(sink);
            on_record(rec);
        }
        return rec;
    };

    ClaimReport report;
    report.claim_id = claim.id;
    report.config = cfg.to_json();
    report.evidence = parallel_map(inputs, cfg.workers, fn);

    bool all_ok = true, partial = false;
    for (const json& rec : report.evidence) {
        all_ok = all_ok && rec.value("ok", false);
        partial = partial || rec.value("partial", false);
    }
    report.status = !all_ok ? ClaimStatus::violated : partial ? ClaimStatus::partial : ClaimStatus::confirmed;
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace pellkit::harness
