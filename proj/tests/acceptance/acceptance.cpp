// One PASS/FAIL line per acceptance criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pellkit/contfrac.hpp"
#include "pellkit/pellian.hpp"
#include "pellkit/zring.hpp"

using namespace pellkit;

namespace {

struct Result {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
};

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<Result()> run;
};

std::vector<unsigned> odd_primes_upto(unsigned n)
{
    std::vector<unsigned> out;
    for (unsigned p = 3; p <= n; p += 2)
        if (is_prime(p))
            out.push_back(p);
    return out;
}

Result cf_structure()
{
    Result res;
    unsigned checked = 0;
    for (unsigned p : odd_primes_upto(50))
        for (unsigned k = 0; k <= 5; ++k) {
            const Integer K = ipow(Integer(p), k + 1);
            const CFExpansion e = expand(QuadIrr::sqrt_of(K * K + 1));
            ++checked;
            if (e.preperiod_len != 1 || e.period_len != 1 || e.quotients[0] != K || e.quotients[1] != 2 * K)
                res.fail("p=" + std::to_string(p) + " k=" + std::to_string(k));
        }
    if (res.pass)
        res.detail = std::to_string(checked) + " expansions [K; 2K]";
    return res;
}

Result dubo_identity()
{
    Result res;
    std::mt19937_64 rng(20240501);
    unsigned done = 0;
    while (done < 500) {
        const Integer alpha = rng() % 10000 + 1, beta = rng() % 10000 + 1;
        if (is_perfect_square(alpha * beta))
            continue;
        const CFExpansion e = lemma_db_expansion(alpha, beta);
        const std::size_t n = rng() % (e.preperiod_len + e.period_len + 6);
        const Integer r = static_cast<long long>(rng() % 201) - 100;
        const Integer u = static_cast<long long>(rng() % 201) - 100;
        if (lemma_db_value(e, n, r, u) != lemma_db_lhs(alpha, beta, e, n, r, u))
            res.fail("alpha=" + alpha.str() + " beta=" + beta.str() + " n=" + std::to_string(n));
        ++done;
    }
    if (res.pass)
        res.detail = "500 instances exact";
    return res;
}

Result theorem_tm1()
{
    Result res;
    unsigned cases = 0;
    for (unsigned p : odd_primes_upto(50))
        for (unsigned k = 0; k <= 3; ++k) {
            if (!case2_residue_search(p, k).empty())
                res.fail("residue hit p=" + std::to_string(p) + " k=" + std::to_string(k));
            for (unsigned l = 0; l <= k; ++l) {
                ++cases;
                const std::string tag = "p=" + std::to_string(p) + " k=" + std::to_string(k) + " l=" + std::to_string(l);
                try {
                    const PellianOutcome o = decide_paper_equation(p, k, l);
                    const PellianOutcome c = solve_complete(o.problem);
                    if (o.verdict != Verdict::unsolvable || c.verdict != Verdict::unsolvable)
                        res.fail(tag);
                } catch (const std::exception& e) {
                    res.fail(tag + ": " + e.what());
                }
            }
        }
    if (res.pass)
        res.detail = std::to_string(cases) + " equations UNSOLVABLE, residue search empty";
    return res;
}

Result fujita_sweep()
{
    Result res;
    unsigned checked = 0;
    for (Integer K = 1; K <= 60; ++K) {
        const Integer D = K * K + 1;
        for (Integer N = -K; N <= K; ++N) {
            if (abs(N) <= 1)
                continue;
            ++checked;
            for (const Solution& w : solve_complete(PellianProblem(D, N)).witnesses)
                if (gcd(w.x, w.y) == 1)
                    res.fail("K=" + K.str() + " N=" + N.str() + " (" + w.x.str() + "," + w.y.str() + ")");
        }
    }
    if (res.pass)
        res.detail = std::to_string(checked) + " equations, no primitive solution";
    return res;
}

Result p2_proposition()
{
    Result res;
    unsigned family = 0, obstructed = 0;
    for (unsigned k = 1; k <= 9; k += 2)
        for (unsigned l = 0; l <= k; ++l) {
            if (2 * l <= k)
                continue;
            const PellianProblem prob = family_problem(2, k, l);
            const Solution w = p2_family(k, l);
            const PellianOutcome o = p2_decide(k, l);
            if (!prob.satisfied_by(w.x, w.y) || o.verdict != Verdict::solvable || o.witnesses.front() != w)
                res.fail("family k=" + std::to_string(k) + " l=" + std::to_string(l));
            ++family;
        }
    for (unsigned k = 0; k <= 8; k += 2)
        for (unsigned l = 0; l <= k; ++l) {
            const PellianOutcome o = p2_decide(k, l);
            const PellianOutcome c = solve_complete(o.problem);
            if (o.verdict != Verdict::unsolvable || o.certificate != "not solvable modulo 5" ||
                c.verdict != Verdict::unsolvable)
                res.fail("even k=" + std::to_string(k) + " l=" + std::to_string(l));
            ++obstructed;
        }
    if (res.pass)
        res.detail = std::to_string(family) + " family witnesses, " + std::to_string(obstructed) +
                     " mod-5 obstructions";
    return res;
}

Result prop_families()
{
    Result res;
    bool saw_5 = false, saw_10 = false;
    unsigned verified = 0;
    for (long long n = 1; n <= 20; ++n)
        for (long long m = 1; m <= n; ++m) {
            if (n % m)
                continue;
            for (std::size_t j = 1; j <= 5; ++j) {
                const PropFamilyResult f = prop_family(n, j, m);
                for (const PropFamilyMember* member : {&f.plus, &f.minus}) {
                    if (member->degenerate)
                        continue;
                    if (!member->verified())
                        res.fail("n=" + std::to_string(n) + " j=" + std::to_string(j) + " m=" + std::to_string(m));
                    ++verified;
                    if (f.b == 5 && f.c == 3 && member->d == 65)
                        saw_5 = true;
                    if (f.b == 10 && f.c == 8 && member->d == 325)
                        saw_10 = true;
                }
            }
        }
    if (!saw_5)
        res.fail("{1,5,-3,65} missing from inventory");
    if (!saw_10)
        res.fail("{1,10,-8,325} missing from inventory");
    if (res.pass)
        res.detail = std::to_string(verified) + " quadruples verified, inventory has {1,5,-3,65} and {1,10,-8,325}";
    return res;
}

bool odd_prime_power(const Integer& n)
{
    if (n < 3 || n % 2 == 0)
        return false;
    Integer p = 3;
    while (n % p != 0)
        p += 2;
    Integer rest = n;
    while (rest % p == 0)
        rest /= p;
    return rest == 1;
}

Result fifumi_desk()
{
    Result res;
    std::string bs;
    for (Integer r = 1; r * r + 1 <= 200; ++r) {
        const Integer b = r * r + 1;
        const bool form = (b % 2 == 1 && is_prime(b)) || (b % 2 == 0 && odd_prime_power(b / 2)) ||
                          odd_prime_power(r) || (r % 2 == 0 && odd_prime_power(r / 2));
        if (!form)
            continue;
        bs += (bs.empty() ? "" : ",") + b.str();
        const auto quads = integer_quadruple_search(b, 100000);
        if (!quads.empty())
            res.fail("b=" + b.str() + " extends to {1," + b.str() + "," + quads.front()[2].str() + "," +
                     quads.front()[3].str() + "}");
    }
    if (res.pass)
        res.detail = "b in {" + bs + "}: no quadruple up to 1e5";
    return res;
}

Result classify_instances()
{
    Result res;
    unsigned n = 0;
    for (const AdmissiblePair& pair : {AdmissiblePair{5, 1, 3, 1}, AdmissiblePair{41, 1, 3, 2}}) {
        const unsigned top = 1u << pair.l_exp;
        const std::string tag = "(" + pair.p.str() + "," + std::to_string(pair.k) + ")";
        for (unsigned e = 0; e <= top; ++e) {
            const Integer t = ipow(pair.q, e);
            const Classification c = theorem3_classify(pair, t);
            ++n;
            if (e % 2 == 0) {
                if (c.kind != TupleExistence::exists_infinite || !c.witness || !c.witness->plus.verified())
                    res.fail(tag + " t=" + t.str() + " expected EXISTS_INFINITE");
            } else if (c.kind != TupleExistence::none || !c.certificate ||
                       c.certificate->verdict != Verdict::unsolvable) {
                res.fail(tag + " t=" + t.str() + " expected NONE with certificate");
            }
        }
        for (unsigned t = 2; t <= 20; t += 2) {
            ++n;
            if (theorem3_classify(pair, t).kind != TupleExistence::none)
                res.fail(tag + " t=" + std::to_string(t) + " expected NONE");
        }
    }
    if (res.pass)
        res.detail = std::to_string(n) + " classifications";
    return res;
}

std::string pair_str(const AdmissiblePair& a)
{
    return "(" + a.p.str() + "," + std::to_string(a.k) + "," + a.q.str() + "," + std::to_string(a.l_exp) + ")";
}

Result admissible_pairs()
{
    Result res;
    const std::vector<AdmissiblePair> expected{
        {5, 1, 3, 1}, {41, 1, 3, 2}, {5, 2, 7, 1}, {29, 2, 41, 1}, {13, 4, 239, 1}};
    const auto found = find_admissible_pairs(50);
    std::string extra, missing;
    for (const auto& a : found)
        if (std::find(expected.begin(), expected.end(), a) == expected.end())
            extra += " " + pair_str(a);
    for (const auto& a : expected)
        if (std::find(found.begin(), found.end(), a) == found.end())
            missing += " " + pair_str(a);
    if (!extra.empty())
        res.fail("unexpected:" + extra + " (2*13 = 5^2 + 1)");
    if (!missing.empty())
        res.fail("missing:" + missing);
    if (res.pass)
        res.detail = "exactly the five tuples";
    else if (missing.empty())
        res.detail += "; the five listed tuples are all present";
    return res;
}

Result oracle_equivalence()
{
    Result res;
    unsigned problems = 0, solvable = 0;
    for (Integer D = 2; D <= 200; ++D) {
        if (is_perfect_square(D))
            continue;
        const PellUnit unit = pell_fundamental(D);
        for (Integer N = -50; N <= 50; ++N) {
            if (N == 0)
                continue;
            const PellianProblem prob(D, N);
            const bool complete = solve_complete(prob).verdict == Verdict::solvable;
            const bool brute = !solve_brute(prob, class_bound(prob, unit)).empty();
            ++problems;
            solvable += complete;
            if (complete != brute)
                res.fail("D=" + D.str() + " N=" + N.str());
        }
    }
    if (res.pass)
        res.detail = std::to_string(problems) + " problems agree (" + std::to_string(solvable) + " solvable)";
    return res;
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "CF structure of sqrt(p^(2k+2)+1)", 5, cf_structure},
        {2, "convergent identity, 500 random instances", 30, dubo_identity},
        {3, "x^2-(p^(2k+2)+1)y^2=-p^(2l+1) unsolvable, p<=50, k<=3", 600, theorem_tm1},
        {4, "no primitive solutions, D=K^2+1, K<=60", 300, fujita_sweep},
        {5, "p=2 family and mod-5 obstruction", 60, p2_proposition},
        {6, "D(-1)-quadruple families, n<=20, j<=5", 120, prop_families},
        {7, "{1,b} has no integer D(-1)-quadruple, b<=200", 600, fifumi_desk},
        {8, "classification for (5,1,3,1) and (41,1,3,2)", 60, classify_instances},
        {9, "admissible pairs up to 50", 10, admissible_pairs},
        {10, "solve_complete vs solve_brute, D<=200, |N|<=50", 600, oracle_equivalence},
    };

    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (only && c.id != only)
            continue;
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.pass && secs > c.limit_seconds)
            r.fail("over time limit");
        std::printf("criterion %2d: %s  %-55s %8.2fs (limit %.0fs)  %s\n", c.id, r.pass ? "PASS" : "FAIL", c.title,
                    secs, c.limit_seconds, r.detail.c_str());
        std::fflush(stdout);
        failures += !r.pass;
    }
    return failures == 0 ? 0 : 1;
}
