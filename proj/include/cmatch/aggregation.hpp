#pragma once

// Side-level choice functions from per-agent ones, under no externalities:
//
//   f_S(A) = ⋃_{a ∈ S} f_a(A ∩ X_a)
//
// plus builders for marriage-style instances.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cmatch/choice.hpp"
#include "cmatch/instance.hpp"

namespace cmatch {

/// X_a: the contracts owned by `agent` under `owners`.
inline ContractSet slice_of(const std::vector<AgentId>& owners, AgentId agent) {
    ContractSet s;
    for (std::size_t id = 0; id < owners.size(); ++id) {
        if (owners[id] == agent) s.insert(static_cast<ContractId>(id));
    }
    return s;
}

/// Builds f_S from per-agent specs.
///
/// `owners[x]` names the agent of this side that contract x belongs to. Each
/// agent's spec must be defined over its own slice, re-indexed so that local
/// id k is the k-th smallest global id in the slice. Every agent owning a
/// contract needs a spec; agents with a spec and no contracts are kept (their
/// spec then has an empty universe).
inline ChoiceSpec aggregate_side(const std::map<AgentId, ChoiceSpec>& parts, const std::vector<AgentId>& owners) {
    const int n = static_cast<int>(owners.size());
    ContractSet::check_universe(n);
    AggregateChoice g;
    g.universe = n;
    ContractSet covered;
    for (const auto& [agent, spec] : parts) {
        const ContractSet slice = slice_of(owners, agent);
        if (spec.universe() != slice.size())
            throw spec_error("agent " + agent.to_string() + " spec is over " + std::to_string(spec.universe()) +
                             " contracts but owns " + std::to_string(slice.size()));
        covered |= slice;
        g.parts.push_back(AgentPart{agent, slice, spec});
    }
    if (covered != ContractSet::full(n)) {
        const ContractId gap = (ContractSet::full(n) - covered).first();
        throw spec_error("contract " + std::to_string(gap) + " belongs to agent " +
                         owners[static_cast<std::size_t>(gap)].to_string() + " which has no choice function");
    }
    return g;
}

/// Per-side owner vectors from contract labels.
inline std::vector<AgentId> owners_on(const std::vector<ContractLabel>& labels, Side side) {
    std::vector<AgentId> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(side == Side::I ? l.producer : l.consumer);
    return out;
}

/// A strict preference list over the other side, best first.
using PreferenceList = std::vector<int>;

/// Contract id of (man, woman) in a marriage universe with `women` women.
inline ContractId marriage_contract(int man, int woman, int women) { return man * women + woman; }

/// Marriage market with X = I × J.
///
/// Each man's choice keeps his single favourite woman among those offered;
/// likewise for women. `men_prefs[i]` must list every woman exactly once
/// and `women_prefs[j]` every man.
inline Instance build_marriage_instance(const std::vector<PreferenceList>& men_prefs,
                                        const std::vector<PreferenceList>& women_prefs) {
    const int men = static_cast<int>(men_prefs.size());
    const int women = static_cast<int>(women_prefs.size());
    if (men * women > kMaxContracts)
        throw spec_error("marriage instance with " + std::to_string(men * women) + " contracts exceeds 64");

    auto check_list = [](const PreferenceList& list, int other, const std::string& who) {
        std::vector<char> seen(static_cast<std::size_t>(other), 0);
        if (static_cast<int>(list.size()) != other)
            throw spec_error(who + " ranks " + std::to_string(list.size()) + " of " + std::to_string(other) +
                             " partners; lists must be complete");
        for (int p : list) {
            if (p < 0 || p >= other || seen[static_cast<std::size_t>(p)])
                throw spec_error(who + " preference list is not a permutation");
            seen[static_cast<std::size_t>(p)] = 1;
        }
    };

    Instance inst;
    inst.universe = men * women;
    std::vector<ContractLabel> labels(static_cast<std::size_t>(inst.universe));
    for (int i = 0; i < men; ++i) inst.agents_i.push_back("m" + std::to_string(i + 1));
    for (int j = 0; j < women; ++j) inst.agents_j.push_back("w" + std::to_string(j + 1));
    for (int i = 0; i < men; ++i) {
        for (int j = 0; j < women; ++j) {
            const ContractId x = marriage_contract(i, j, women);
            inst.names.push_back(inst.agents_i[static_cast<std::size_t>(i)] + ":" +
                                 inst.agents_j[static_cast<std::size_t>(j)]);
            labels[static_cast<std::size_t>(x)] = ContractLabel{{Side::I, i}, {Side::J, j}};
        }
    }

    // Man i's slice is {(i, 0), (i, 1), ...}: local index = woman.
    std::map<AgentId, ChoiceSpec> men_parts;
    for (int i = 0; i < men; ++i) {
        check_list(men_prefs[static_cast<std::size_t>(i)], women, inst.agents_i[static_cast<std::size_t>(i)]);
        men_parts.emplace(AgentId{Side::I, i}, top_of_order(women, men_prefs[static_cast<std::size_t>(i)]));
    }
    // Woman j's slice is {(0, j), (1, j), ...}: local index = man.
    std::map<AgentId, ChoiceSpec> women_parts;
    for (int j = 0; j < women; ++j) {
        check_list(women_prefs[static_cast<std::size_t>(j)], men, inst.agents_j[static_cast<std::size_t>(j)]);
        women_parts.emplace(AgentId{Side::J, j}, top_of_order(men, women_prefs[static_cast<std::size_t>(j)]));
    }

    inst.f1 = aggregate_side(men_parts, owners_on(labels, Side::I));
    inst.f2 = aggregate_side(women_parts, owners_on(labels, Side::J));
    inst.labels = std::move(labels);
    // Tops of strict orders, aggregated: coherent by construction.
    inst.status1 = CoherenceStatus::asserted;
    inst.status2 = CoherenceStatus::asserted;
    return inst;
}

} // namespace cmatch
