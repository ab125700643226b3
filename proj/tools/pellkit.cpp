#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pellkit/harness/claims.hpp"

namespace {

using namespace pellkit;
using namespace pellkit::harness;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

struct Output {
    bool as_json = false;
    std::string out_path;

    void emit(const json& j, const std::string& text) const
    {
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            if (!f)
                throw std::runtime_error("cannot write " + out_path);
            f << j.dump(2) << '\n';
        }
        if (as_json)
            std::cout << j.dump(2) << '\n';
        else
            std::cout << text;
    }
};

std::string join(const std::vector<Integer>& v, const char* sep = ", ")
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? sep : "") + v[i].str();
    return out;
}

std::string pair_str(const AdmissiblePair& a)
{
    return "(" + a.p.str() + "," + std::to_string(a.k) + "," + a.q.str() + "," + std::to_string(a.l_exp) + ")";
}

int cmd_cf(const Output& out, const std::string& d, const std::string& s, const std::string& t, std::size_t n_conv)
{
    const QuadIrr alpha(parse_integer(d), parse_integer(s), parse_integer(t));
    const CFExpansion e = expand(alpha);
    const json j = to_json(e, n_conv);

    std::ostringstream text;
    text << "(" << alpha.s() << " + sqrt(" << alpha.d() << ")) / " << alpha.t() << '\n';
    text << "preperiod: [" << join({e.preperiod().begin(), e.preperiod().end()}) << "]\n";
    text << "period:    [" << join({e.period().begin(), e.period().end()}) << "]\n";
    if (n_conv > 0) {
        const auto seq = convergents(e, n_conv - 1);
        text << "convergents:";
        for (long m = 0; m < static_cast<long>(n_conv); ++m)
            text << ' ' << seq.at(m).p << '/' << seq.at(m).q;
        text << '\n';
    }
    out.emit(j, text.str());
    return kOk;
}

int cmd_pell(const Output& out, const std::string& D, const std::string& N, std::size_t stream)
{
    const PellianProblem prob(parse_integer(D), parse_integer(N));
    const PellianOutcome o = solve_complete(prob);
    json j = to_json(o);

    std::ostringstream text;
    text << "x^2 - " << prob.D << " y^2 = " << prob.N << ": " << to_string(o.verdict) << '\n';
    text << "method: " << to_string(o.method) << ", search bound y <= " << o.search_bound_used << '\n';
    if (!o.certificate.empty())
        text << "certificate: " << o.certificate << '\n';
    for (const Solution& w : o.witnesses)
        text << "  (" << w.x << ", " << w.y << ")\n";
    if (stream > 0 && o.verdict == Verdict::solvable) {
        const auto sols = all_solutions_stream(prob, stream);
        j["stream"] = to_json(sols);
        text << "first " << sols.size() << " positive solutions:\n";
        for (const Solution& w : sols)
            text << "  (" << w.x << ", " << w.y << ")\n";
    }
    out.emit(j, text.str());
    return kOk;
}

int cmd_tuple(const Output& out, const std::string& n, const std::string& t, const std::vector<std::string>& elems)
{
    const Integer tt = parse_integer(t);
    std::vector<RingElem> ring;
    for (const std::string& e : elems)
        ring.push_back(parse_ring_elem(e, tt));
    const TupleReport r = check_tuple(ring, parse_integer(n));

    std::ostringstream text;
    text << "{";
    for (std::size_t i = 0; i < r.elements.size(); ++i)
        text << (i ? ", " : "") << r.elements[i].str();
    text << "} in " << (r.t == 0 ? std::string("Z") : "Z[sqrt(-" + r.t.str() + ")]") << ", n = " << r.n << ": ";
    const auto factor = [](const RingElem& e) {
        return e.im == 0 && e.re >= 0 ? e.str() : "(" + e.str() + ")";
    };
    const std::string shift = r.n < 0 ? " - " + Integer(-r.n).str() : " + " + r.n.str();
    if (r.verified()) {
        text << "verified\n";
        for (const PairWitness& w : r.witnesses)
            text << "  " << factor(r.elements[w.i]) << " * " << factor(r.elements[w.j]) << shift << " = ("
                 << w.root.str() << ")^2\n";
    } else {
        const auto [i, j] = *r.failing_pair;
        text << "not a tuple: " << factor(r.elements[i]) << " * " << factor(r.elements[j]) << shift << " is not a square\n";
    }
    out.emit(to_json(r), text.str());
    return r.verified() ? kOk : kViolated;
}

int cmd_pairs(const Output& out, unsigned limit)
{
    const auto pairs = find_admissible_pairs(Integer(limit));
    json j = json::array();
    std::ostringstream text;
    for (const AdmissiblePair& a : pairs) {
        j.push_back(to_json(a));
        text << pair_str(a) << '\n';
    }
    out.emit(j, text.str());
    return kOk;
}

std::vector<json> read_jsonl(const std::string& path)
{
    std::vector<json> out;
    std::ifstream f(path);
    std::string line;
    while (std::getline(f, line))
        if (!line.empty())
            out.push_back(json::parse(line));
    return out;
}

std::string claim_summary(const ClaimReport& r)
{
    std::ostringstream text;
    if (r.claim_id == "pairs") {
        for (const json& rec : r.evidence)
            for (const json& tup : rec.value("tuples", json::array()))
                text << "  (" << tup[0].get<std::string>() << "," << tup[1] << "," << tup[2].get<std::string>()
                     << "," << tup[3] << ")\n";
    } else if (r.claim_id == "prop26") {
        const auto shorter = [](const std::string& a, const std::string& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        };
        std::set<std::string, decltype(shorter)> sets(shorter);
        for (const json& rec : r.evidence) {
            if (!rec.contains("plus"))
                continue;
            for (const char* side : {"plus", "minus"}) {
                const json& m = rec[side];
                if (m.value("degenerate", true))
                    continue;
                sets.insert("{1, " + rec["b"].get<std::string>() + ", -" + rec["c"].get<std::string>() + ", " +
                            m["d"].get<std::string>() + "}");
            }
        }
        text << "  " << sets.size() << " distinct quadruples verified, e.g.";
        std::size_t shown = 0;
        for (const auto& s : sets) {
            if (shown++ == 4)
                break;
            text << ' ' << s;
        }
        text << '\n';
    }
    std::size_t shown = 0;
    for (const json& rec : r.evidence) {
        if (rec.value("ok", false))
            continue;
        if (shown++ == 5) {
            text << "  ...\n";
            break;
        }
        text << "  counterexample: " << rec.dump() << '\n';
    }
    return text.str();
}

int cmd_verify(const Output& out, const std::string& id, SweepConfig cfg, bool resume)
{
    const Claim* claim = find_claim(id);
    if (!claim) {
        std::cerr << "unknown claim '" << id << "'; known:";
        for (const Claim& c : claims())
            std::cerr << ' ' << c.id;
        std::cerr << '\n';
        return kUsage;
    }
    std::vector<json> prior;
    if (resume && !cfg.evidence_path.empty())
        prior = read_jsonl(cfg.evidence_path);

    std::ofstream stream;
    std::function<void(const json&)> on_record;
    if (!cfg.evidence_path.empty()) {
        stream.open(cfg.evidence_path, resume ? std::ios::app : std::ios::trunc);
        if (!stream)
            throw std::runtime_error("cannot write " + cfg.evidence_path);
        on_record = [&](const json& rec) { stream << rec.dump() << '\n' << std::flush; };
    }

    const ClaimReport report = run_claim(*claim, cfg, prior, on_record);

    if (!cfg.evidence_path.empty()) {
        // canonical order once the sweep is complete
        stream.close();
        std::ofstream f(cfg.evidence_path);
        if (!f)
            throw std::runtime_error("cannot write " + cfg.evidence_path);
        for (const json& rec : report.evidence)
            f << rec.dump() << '\n';
    }

    std::ostringstream text;
    text << report.claim_id << ": " << to_string(report.status) << " (" << report.evidence.size() << " cases, "
         << report.elapsed_seconds << " s)\n"
         << claim_summary(report);
    out.emit(report.to_json(), text.str());
    return report.status == ClaimStatus::confirmed ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pellkit: Pellian equations, continued fractions and D(n)-tuples"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file with sweep bounds; command-line flags win");

    Output out;
    SweepConfig cfg;
    app.add_flag("--json", out.as_json, "print JSON instead of text");
    app.add_option("--out", out.out_path, "also write the JSON result to this file");
    app.add_option("--workers", cfg.workers, "worker threads for sweeps")->check(CLI::PositiveNumber);

    auto* cf = app.add_subcommand("cf", "continued fraction of (s + sqrt(d)) / t");
    std::string cf_d, cf_s, cf_t;
    std::size_t n_conv = 8;
    cf->add_option("d", cf_d)->required();
    cf->add_option("s", cf_s)->required();
    cf->add_option("t", cf_t)->required();
    cf->add_option("--convergents", n_conv, "number of convergents to print");

    auto* pell = app.add_subcommand("pell", "decide x^2 - D y^2 = N");
    std::string pell_d, pell_n;
    std::size_t stream = 0;
    pell->add_option("D", pell_d)->required();
    pell->add_option("N", pell_n)->required();
    pell->add_option("--stream", stream, "also list this many positive solutions");

    auto* verify = app.add_subcommand("verify", "run a claim sweep");
    std::string claim_id;
    bool resume = false;
    verify->add_option("claim", claim_id, "claim id")->required();
    app.add_option("--p-max,--p_max", cfg.p_max)->check(CLI::PositiveNumber);
    app.add_option("--k-max,--k_max", cfg.k_max)->check(CLI::PositiveNumber);
    app.add_option("--y-max,--y_max", cfg.y_max)->check(CLI::PositiveNumber);
    app.add_option("--c-max,--c_max", cfg.c_max)->check(CLI::PositiveNumber);
    app.add_option("--n-max,--n_max", cfg.n_max)->check(CLI::PositiveNumber);
    app.add_option("--j-max,--j_max", cfg.j_max)->check(CLI::PositiveNumber);
    app.add_option("--limit", cfg.limit, "pairs: p bound; fujita: K bound")->check(CLI::PositiveNumber);
    app.add_option("--b-max,--b_max", cfg.b_max)->check(CLI::PositiveNumber);
    app.add_option("--t-max,--t_max", cfg.t_max)->check(CLI::PositiveNumber);
    app.add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed);
    verify->add_option("--evidence", cfg.evidence_path, "JSON Lines evidence file");
    verify->add_flag("--resume", resume, "reuse records already in the evidence file");

    auto* tuple = app.add_subcommand("tuple", "check a D(n)-tuple in Z[sqrt(-t)]");
    std::string tuple_n, tuple_t = "0";
    std::vector<std::string> elems;
    tuple->add_option("-n", tuple_n, "the shift n")->required();
    tuple->add_option("-t", tuple_t, "ring parameter t >= 0");
    tuple->add_option("elements", elems, "elements a, a+b*w, b*w with w = sqrt(-t)")->required();

    auto* pairs = app.add_subcommand("pairs", "list (p, k, q, l) with 2p^k = q^(2^l) + 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*cf)
            return cmd_cf(out, cf_d, cf_s, cf_t, n_conv);
        if (*pell)
            return cmd_pell(out, pell_d, pell_n, stream);
        if (*verify)
            return cmd_verify(out, claim_id, cfg, resume);
        if (*tuple)
            return cmd_tuple(out, tuple_n, tuple_t, elems);
        if (*pairs)
            return cmd_pairs(out, cfg.limit);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
