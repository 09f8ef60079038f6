#pragma once

// JSON and text renderings of results. Sets print as name arrays in id
// order and object keys come out sorted, so output is byte-stable.

#include <sstream>
#include <string>

#include "json.hpp"

#include "cmatch/axioms.hpp"
#include "cmatch/engine.hpp"
#include "cmatch/market.hpp"
#include "cmatch/oracle.hpp"

namespace cmatch::io {

using nlohmann::json;

inline json names_json(const Instance& inst, ContractSet s) {
    json arr = json::array();
    for (ContractId x : s) arr.push_back(inst.name_of(x));
    return arr;
}

inline json trace_json(const Instance& inst, const Trace& trace) {
    json steps = json::array();
    for (std::size_t j = 0; j < trace.steps.size(); ++j) {
        const auto& s = trace.steps[j];
        steps.push_back({{"j", j},
                         {"pool", names_json(inst, s.pool)},
                         {"offers", names_json(inst, s.offers)},
                         {"accepted", names_json(inst, s.accepted)}});
    }
    return {{"proposer", trace.proposer}, {"iterations", trace.iterations()}, {"steps", steps}};
}

inline std::string trace_text(const Instance& inst, const Trace& trace) {
    std::ostringstream out;
    for (std::size_t j = 0; j < trace.steps.size(); ++j) {
        const auto& s = trace.steps[j];
        out << "Z" << j << " = " << inst.render(s.pool) << "  offers " << inst.render(s.offers) << "  accepted "
            << inst.render(s.accepted) << "\n";
    }
    return out.str();
}

inline json verdict_json(const Instance& inst, const StableAgreementVerdict& v) {
    json j = {{"agreement", v.agreement.holds},
              {"stable", v.stability.holds},
              {"rejected_by_f1", names_json(inst, v.agreement.rejected_by_1)},
              {"rejected_by_f2", names_json(inst, v.agreement.rejected_by_2)}};
    if (v.stability.blocking_contract) j["blocking_contract"] = inst.name_of(*v.stability.blocking_contract);
    if (v.stability.blocking_set) j["blocking_set"] = names_json(inst, *v.stability.blocking_set);
    return j;
}

inline json solve_json(const Instance& inst, const SolveResult& r, bool with_trace) {
    json j = {{"proposer", r.trace.proposer},
              {"outcome", names_json(inst, r.outcome)},
              {"iterations", r.trace.iterations()},
              {"stable_agreement", r.verdict.holds()},
              {"verdict", verdict_json(inst, r.verdict)},
              {"coherence", {{"f1", status_name(inst.status1)}, {"f2", status_name(inst.status2)}}},
              {"guarantees_apply", r.guarantees_apply}};
    if (with_trace) j["trace"] = trace_json(inst, r.trace);
    return j;
}

inline json violation_json(const Instance& inst, const ViolationReport& v) {
    json j = {{"axiom", axiom_name(v.axiom)}, {"a", names_json(inst, v.a)}, {"b", names_json(inst, v.b)}};
    if (v.x) j["x"] = inst.name_of(*v.x);
    return j;
}

inline json coherence_json(const Instance& inst, const CoherenceReport& r) {
    auto list = [&](const std::vector<ViolationReport>& vs) {
        json arr = json::array();
        for (const auto& v : vs) arr.push_back(violation_json(inst, v));
        return arr;
    };
    return {{"coherent", r.coherent()},
            {"contraction", list(r.contraction)},
            {"irc", list(r.irc)},
            {"substitutes", list(r.substitutes)},
            {"path_independence", list(r.path_independence)},
            {"checker_disagreement", r.checker_disagreement}};
}

inline json catalog_json(const Instance& inst, const StableSetCatalog& cat) {
    json sets = json::array();
    for (const auto& a : cat.agreements) sets.push_back(names_json(inst, a));
    json order = json::array();
    for (std::size_t a = 0; a < cat.size(); ++a)
        for (std::size_t b = 0; b < cat.size(); ++b)
            if (a != b && cat.leq(a, b)) order.push_back({a, b});
    return {{"stable_agreements", sets}, {"leq_1", order}};
}

inline json no_shortage_json(const MEconomy& e, const NoShortageReport& r) {
    json missing = json::array();
    for (const auto& m : r.missing)
        missing.push_back({{"producer", e.instance.agents_i.at(static_cast<std::size_t>(m.producer))},
                           {"consumer", e.instance.agents_j.at(static_cast<std::size_t>(m.consumer))},
                           {"template", e.templates.at(static_cast<std::size_t>(m.item))},
                           {"price", e.grid.value(m.price)}});
    json unspared = json::array();
    for (const auto& u : r.unspared)
        unspared.push_back({{"contract", e.instance.name_of(u.contract)}, {"agreement", names_json(e.instance, u.agreement)}});
    return {{"ok", r.ok()}, {"missing_tuples", missing}, {"unspared", unspared}};
}

inline json money_json(const MEconomy& e, const MoneyReport& r) {
    auto list = [&](const std::vector<MoneyViolation>& vs) {
        json arr = json::array();
        for (const auto& v : vs) {
            const auto& names = v.agent.side == Side::I ? e.instance.agents_i : e.instance.agents_j;
            arr.push_back({{"agent", names.at(static_cast<std::size_t>(v.agent.index))},
                           {"offered", names_json(e.instance, v.offered)},
                           {"lower", e.instance.name_of(v.lower)},
                           {"higher", e.instance.name_of(v.higher)}});
        }
        return arr;
    };
    return {{"ok", r.ok()}, {"producer", list(r.producer)}, {"consumer", list(r.consumer)}};
}

inline json two_prices_json(const MEconomy& e, ContractSet a, const TwoPricesReport& r) {
    json gaps = json::array();
    for (const auto& g : r.gaps)
        gaps.push_back({{"low", e.instance.name_of(g.low)},
                        {"high", e.instance.name_of(g.high)},
                        {"between_price", e.grid.value(g.between)}});
    return {{"ok", r.ok()}, {"advisory", r.advisory}, {"agreement", names_json(e.instance, a)}, {"gaps", gaps}};
}

} // namespace cmatch::io
