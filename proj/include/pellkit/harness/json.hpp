#pragma once

// JSON views of the library types. Integers are always decimal strings.

#include <nlohmann/json.hpp>

#include "pellkit/contfrac.hpp"
#include "pellkit/pellian.hpp"
#include "pellkit/zring.hpp"

namespace pellkit::harness {

using nlohmann::json;

inline json to_json(const Integer& n) { return n.str(); }

inline json to_json(const std::vector<Integer>& values)
{
    json out = json::array();
    for (const Integer& v : values)
        out.push_back(v.str());
    return out;
}

inline json to_json(const Solution& s) { return {{"x", s.x.str()}, {"y", s.y.str()}}; }

inline json to_json(const std::vector<Solution>& sols)
{
    json out = json::array();
    for (const Solution& s : sols)
        out.push_back(to_json(s));
    return out;
}

inline json to_json(const PellianProblem& p) { return {{"D", p.D.str()}, {"N", p.N.str()}}; }

inline json to_json(const PellianOutcome& o)
{
    return {{"problem", to_json(o.problem)},
            {"verdict", to_string(o.verdict)},
            {"method", to_string(o.method)},
            {"witnesses", to_json(o.witnesses)},
            {"search_bound_used", o.search_bound_used.str()},
            {"certificate", o.certificate}};
}

inline json to_json(const CFExpansion& e, std::size_t n_convergents)
{
    json conv = json::array();
    if (n_convergents > 0) {
        const auto seq = convergents(e, n_convergents - 1);
        for (long m = 0; m < static_cast<long>(n_convergents); ++m)
            conv.push_back({{"p", seq.at(m).p.str()}, {"q", seq.at(m).q.str()}});
    }
    json aux = json::array();
    for (const SurdState& st : e.aux)
        aux.push_back({{"s", st.s.str()}, {"t", st.t.str()}});
    return {{"d", e.alpha.d().str()},
            {"s", e.alpha.s().str()},
            {"t", e.alpha.t().str()},
            {"quotients", to_json(std::vector<Integer>(e.preperiod().begin(), e.preperiod().end()))},
            {"period", to_json(std::vector<Integer>(e.period().begin(), e.period().end()))},
            {"aux", std::move(aux)},
            {"convergents", std::move(conv)}};
}

inline json to_json(const RingElem& r) { return r.str(); }

inline json to_json(const TupleReport& r)
{
    json elements = json::array();
    for (const RingElem& e : r.elements)
        elements.push_back(to_json(e));
    json witnesses = json::array();
    for (const PairWitness& w : r.witnesses)
        witnesses.push_back({{"i", w.i}, {"j", w.j}, {"root", to_json(w.root)}});
    json out{{"elements", std::move(elements)},
             {"n", r.n.str()},
             {"t", r.t.str()},
             {"verified", r.verified()},
             {"witnesses", std::move(witnesses)}};
    out["failing_pair"] = r.failing_pair ? json::array({r.failing_pair->first, r.failing_pair->second}) : json(nullptr);
    return out;
}

inline json to_json(const PropFamilyMember& m)
{
    json roots = json::array();
    for (const RingElem& r : m.closed_form_roots)
        roots.push_back(to_json(r));
    json out{{"sign", m.sign > 0 ? "+" : "-"},
             {"d", m.d.str()},
             {"degenerate", m.degenerate},
             {"closed_form_roots", std::move(roots)},
             {"closed_forms_hold", m.closed_forms_hold},
             {"verified", m.verified()}};
    if (m.degenerate)
        out["degenerate_reason"] = m.degenerate_reason;
    if (m.report)
        out["report"] = to_json(*m.report);
    if (m.report_sub)
        out["report_sub"] = to_json(*m.report_sub);
    return out;
}

inline json to_json(const PropFamilyResult& r)
{
    return {{"n", r.n.str()}, {"j", r.j},         {"m", r.m.str()},         {"b", r.b.str()},
            {"x", r.x.str()}, {"y", r.y.str()},   {"c", r.c.str()},         {"plus", to_json(r.plus)},
            {"minus", to_json(r.minus)}};
}

inline json to_json(const AdmissiblePair& a)
{
    return json::array({a.p.str(), a.k, a.q.str(), a.l_exp});
}

inline json to_json(const Classification& c)
{
    json out{{"kind", to_string(c.kind)}, {"reason", c.reason}};
    if (c.witness)
        out["witness"] = to_json(*c.witness);
    if (c.certificate)
        out["certificate"] = to_json(*c.certificate);
    return out;
}

inline Integer integer_field(const json& j, const char* key)
{
    const json& v = j.at(key);
    if (v.is_string())
        return parse_integer(v.get<std::string>());
    if (v.is_number_integer())
        return Integer(v.get<long long>());
    throw std::invalid_argument(std::string("field '") + key + "' is not an integer");
}

}  // namespace pellkit::harness
