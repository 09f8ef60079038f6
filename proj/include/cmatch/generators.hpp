#pragma once

// Seeded random instances. All generators are deterministic in the seed for
// a given standard library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cmatch/aggregation.hpp"
#include "cmatch/market.hpp"

namespace cmatch::gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::vector<ContractId> random_order(Rng& rng, int k) {
    std::vector<ContractId> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

/// A coherent agent spec on k contracts: a union of 1-3 orders or a
/// responsive quota.
inline ChoiceSpec random_coherent_part(Rng& rng, int k) {
    if (uniform(rng, 0, 1) == 0) {
        std::vector<std::vector<ContractId>> orders;
        const int count = uniform(rng, 1, 3);
        for (int i = 0; i < count; ++i) orders.push_back(random_order(rng, k));
        return union_of_orders_choice(k, std::move(orders));
    }
    return responsive_quota(k, random_order(rng, k), uniform(rng, 0, std::max(k, 1)));
}

struct CoherentShape {
    int min_contracts = 1;
    int max_contracts = 10;
    int max_agents_per_side = 3;
};

/// Random agent-labelled instance whose sides aggregate random coherent parts.
inline Instance random_coherent_instance(std::uint64_t seed, const CoherentShape& shape = {}) {
    Rng rng(seed);
    const int n = uniform(rng, shape.min_contracts, shape.max_contracts);
    const int ni = uniform(rng, 1, shape.max_agents_per_side);
    const int nj = uniform(rng, 1, shape.max_agents_per_side);
    Instance inst;
    inst.universe = n;
    std::vector<ContractLabel> labels;
    for (int i = 0; i < ni; ++i) inst.agents_i.push_back("i" + std::to_string(i + 1));
    for (int j = 0; j < nj; ++j) inst.agents_j.push_back("j" + std::to_string(j + 1));
    std::map<std::pair<int, int>, int> copies;
    for (int x = 0; x < n; ++x) {
        const int i = uniform(rng, 0, ni - 1);
        const int j = uniform(rng, 0, nj - 1);
        labels.push_back({{Side::I, i}, {Side::J, j}});
        const int copy = copies[{i, j}]++;
        inst.names.push_back(inst.agents_i[static_cast<std::size_t>(i)] + inst.agents_j[static_cast<std::size_t>(j)] +
                             (copy == 0 ? "" : "_" + std::to_string(copy)));
    }
    auto side_parts = [&](Side side, int agents) {
        std::map<AgentId, ChoiceSpec> parts;
        const auto owners = owners_on(labels, side);
        for (int a = 0; a < agents; ++a) {
            const AgentId id{side, a};
            parts.emplace(id, random_coherent_part(rng, slice_of(owners, id).size()));
        }
        return aggregate_side(parts, owners);
    };
    inst.f1 = side_parts(Side::I, ni);
    inst.f2 = side_parts(Side::J, nj);
    inst.labels = std::move(labels);
    inst.status1 = CoherenceStatus::asserted;
    inst.status2 = CoherenceStatus::asserted;
    return inst;
}

struct MarriageProfile {
    std::vector<PreferenceList> men;
    std::vector<PreferenceList> women;
};

/// Complete strict preferences for between 1 and `max_side` agents per side.
inline MarriageProfile random_marriage(std::uint64_t seed, int max_side = 4) {
    Rng rng(seed);
    const int men = uniform(rng, 1, max_side);
    const int women = uniform(rng, 1, max_side);
    MarriageProfile p;
    for (int i = 0; i < men; ++i) p.men.push_back(random_order(rng, women));
    for (int j = 0; j < women; ++j) p.women.push_back(random_order(rng, men));
    return p;
}

/// Parameters behind a generated economy, kept so it can be rebuilt.
struct EconomyRecipe {
    int producers = 1;
    int consumers = 1;
    int templates = 1;
    std::vector<std::int64_t> grid;
    int copies = 2;
    std::vector<std::vector<std::int64_t>> unit_cost;    // [producer][template]
    std::vector<std::vector<std::int64_t>> willingness;  // [consumer][template]
};

/// Every (i, j, t, p) tuple `copies` times, linear producers, unit-demand consumers.
inline MEconomy economy_from_recipe(const EconomyRecipe& r) {
    std::vector<MarketContract> contracts;
    std::vector<std::string> names;
    std::vector<std::string> producer_names, consumer_names, templates;
    for (int i = 0; i < r.producers; ++i) producer_names.push_back("p" + std::to_string(i + 1));
    for (int j = 0; j < r.consumers; ++j) consumer_names.push_back("c" + std::to_string(j + 1));
    for (int t = 0; t < r.templates; ++t) templates.push_back("t" + std::to_string(t + 1));
    for (int i = 0; i < r.producers; ++i)
        for (int j = 0; j < r.consumers; ++j)
            for (int t = 0; t < r.templates; ++t)
                for (int p = 0; p < static_cast<int>(r.grid.size()); ++p)
                    for (int c = 0; c < r.copies; ++c) {
                        contracts.push_back({{Side::I, i}, {Side::J, j}, t, p});
                        names.push_back(producer_names[static_cast<std::size_t>(i)] + "-" +
                                        consumer_names[static_cast<std::size_t>(j)] + "-" +
                                        templates[static_cast<std::size_t>(t)] + "@" +
                                        std::to_string(r.grid[static_cast<std::size_t>(p)]) + "#" + std::to_string(c));
                    }
    const PriceGrid grid{r.grid};
    std::map<AgentId, ChoiceSpec> agents;
    auto slice_for = [&](AgentId a) {
        ContractSet s;
        for (std::size_t x = 0; x < contracts.size(); ++x) {
            if ((a.side == Side::I ? contracts[x].producer : contracts[x].consumer) == a) s.insert(static_cast<ContractId>(x));
        }
        return s;
    };
    for (int i = 0; i < r.producers; ++i) {
        const AgentId id{Side::I, i};
        const auto local = local_contracts(contracts, slice_for(id));
        agents.emplace(id, build_linear_producer(local, grid, r.unit_cost[static_cast<std::size_t>(i)]));
    }
    for (int j = 0; j < r.consumers; ++j) {
        const AgentId id{Side::J, j};
        const auto local = local_contracts(contracts, slice_for(id));
        agents.emplace(id, build_unit_demand_consumer(local, grid, r.willingness[static_cast<std::size_t>(j)]));
    }
    auto e = build_economy(std::move(contracts), grid, std::move(templates), std::move(producer_names),
                           std::move(consumer_names), std::move(agents), std::move(names));
    e.instance.status1 = CoherenceStatus::asserted;
    e.instance.status2 = CoherenceStatus::asserted;
    return e;
}

/// A random conforming economy with at most `max_contracts` contracts.
inline EconomyRecipe random_economy_recipe(std::uint64_t seed, int max_contracts = 14) {
    Rng rng(seed);
    EconomyRecipe r;
    r.copies = 2;
    // Pick shapes until the duplicated tuple count fits.
    while (true) {
        r.producers = uniform(rng, 1, 2);
        r.consumers = uniform(rng, 1, 2);
        r.templates = uniform(rng, 1, 2);
        const int levels = uniform(rng, 1, 7);
        if (r.copies * r.producers * r.consumers * r.templates * levels <= max_contracts) {
            r.grid.clear();
            const std::int64_t base = uniform(rng, 5, 20);
            for (int p = 0; p < levels; ++p) r.grid.push_back(base + p);
            break;
        }
    }
    const auto lo = static_cast<int>(r.grid.front()) - 1;
    const auto hi = static_cast<int>(r.grid.back()) + 1;
    r.unit_cost.assign(static_cast<std::size_t>(r.producers), {});
    for (auto& row : r.unit_cost)
        for (int t = 0; t < r.templates; ++t) row.push_back(uniform(rng, lo, hi));
    r.willingness.assign(static_cast<std::size_t>(r.consumers), {});
    for (auto& row : r.willingness)
        for (int t = 0; t < r.templates; ++t) row.push_back(uniform(rng, lo, hi));
    return r;
}

inline MEconomy random_conforming_economy(std::uint64_t seed, int max_contracts = 14) {
    return economy_from_recipe(random_economy_recipe(seed, max_contracts));
}

// --- valuations with the substitutes property ------------------------------

/// v(B) = sum of item values.
inline std::vector<Rational> additive_valuation(const std::vector<std::int64_t>& item) {
    const int n = static_cast<int>(item.size());
    std::vector<Rational> v(std::size_t{1} << n);
    for (std::size_t m = 0; m < v.size(); ++m) {
        Rational s{0};
        for (ContractId x : ContractSet::from_mask(m)) s += item[static_cast<std::size_t>(x)];
        v[m] = s;
    }
    return v;
}

/// v(B) = max item value in B, v(∅) = 0.
inline std::vector<Rational> unit_demand_valuation(const std::vector<std::int64_t>& item) {
    const int n = static_cast<int>(item.size());
    std::vector<Rational> v(std::size_t{1} << n);
    for (std::size_t m = 1; m < v.size(); ++m) {
        std::int64_t best = 0;
        bool first = true;
        for (ContractId x : ContractSet::from_mask(m)) {
            const auto val = item[static_cast<std::size_t>(x)];
            if (first || val > best) best = val;
            first = false;
        }
        v[m] = best;
    }
    return v;
}

/// Assignment (OXS) valuation: v(B) is the maximum total weight of a
/// matching between the items of B and a set of slots, weight[item][slot] >= 0.
inline std::vector<Rational> assignment_valuation(const std::vector<std::vector<std::int64_t>>& weight) {
    const int n = static_cast<int>(weight.size());
    const int slots = n == 0 ? 0 : static_cast<int>(weight.front().size());
    // best[m][s]: max weight matching items of m into slots with index < s, via DP on slot masks
    std::vector<Rational> v(std::size_t{1} << n);
    for (std::size_t m = 0; m < v.size(); ++m) {
        const auto items = ContractSet::from_mask(m).ids();
        // dp over items, state = used slot mask
        std::vector<std::int64_t> dp(std::size_t{1} << slots, -1);
        dp[0] = 0;
        for (ContractId x : items) {
            auto next = dp;
            for (std::size_t used = 0; used < dp.size(); ++used) {
                if (dp[used] < 0) continue;
                for (int s = 0; s < slots; ++s) {
                    if (used & (std::size_t{1} << s)) continue;
                    const std::size_t u2 = used | (std::size_t{1} << s);
                    next[u2] = std::max(next[u2], dp[used] + weight[static_cast<std::size_t>(x)][static_cast<std::size_t>(s)]);
                }
            }
            dp = std::move(next);
        }
        v[m] = *std::max_element(dp.begin(), dp.end());
    }
    return v;
}

inline std::vector<std::int64_t> random_values(Rng& rng, int n, int lo, int hi) {
    std::vector<std::int64_t> out;
    for (int i = 0; i < n; ++i) out.push_back(uniform(rng, lo, hi));
    return out;
}

} // namespace cmatch::gen
