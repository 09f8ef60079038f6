#pragma once

// Markets with money: every contract carries a producer, a consumer, a
// template (the traded item with all its terms except price) and a price
// drawn from a finite ordered grid. Producers like higher prices, consumers
// lower ones, and neither cares about the counterparty's identity.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmatch/aggregation.hpp"
#include "cmatch/engine.hpp"

namespace cmatch {

/// Strictly increasing finite price grid. Contracts refer to prices by index.
struct PriceGrid {
    std::vector<std::int64_t> values;

    int size() const noexcept { return static_cast<int>(values.size()); }
    std::int64_t value(int level) const { return values.at(static_cast<std::size_t>(level)); }

    void validate() const {
        if (values.empty()) throw spec_error("price grid is empty");
        for (std::size_t k = 1; k < values.size(); ++k) {
            if (values[k] <= values[k - 1]) throw spec_error("price grid is not strictly increasing");
        }
    }

    std::optional<int> level_of(std::int64_t v) const {
        auto it = std::lower_bound(values.begin(), values.end(), v);
        if (it == values.end() || *it != v) return std::nullopt;
        return static_cast<int>(it - values.begin());
    }
};

struct MarketContract {
    AgentId producer{Side::I, 0};
    AgentId consumer{Side::J, 0};
    int item = 0;   // template index
    int price = 0;  // grid level

    bool same_terms(const MarketContract& o) const {
        return producer == o.producer && consumer == o.consumer && item == o.item && price == o.price;
    }
    friend bool operator==(const MarketContract&, const MarketContract&) = default;
};

/// An economy: the agreement problem plus each contract's economic content
/// and every agent's individual choice function.
struct MEconomy {
    Instance instance;
    std::vector<MarketContract> contracts;
    PriceGrid grid;
    std::vector<std::string> templates;
    std::map<AgentId, ChoiceSpec> agents;

    int producers() const { return static_cast<int>(instance.agents_i.size()); }
    int consumers() const { return static_cast<int>(instance.agents_j.size()); }
    const MarketContract& contract(ContractId x) const { return contracts.at(static_cast<std::size_t>(x)); }

    ContractSet slice(AgentId a) const {
        ContractSet s;
        for (std::size_t x = 0; x < contracts.size(); ++x) {
            if ((a.side == Side::I ? contracts[x].producer : contracts[x].consumer) == a) s.insert(static_cast<ContractId>(x));
        }
        return s;
    }
};

/// Assembles an economy and its side-level choice functions.
inline MEconomy build_economy(std::vector<MarketContract> contracts, PriceGrid grid, std::vector<std::string> templates,
                              std::vector<std::string> producer_names, std::vector<std::string> consumer_names,
                              std::map<AgentId, ChoiceSpec> agents, std::vector<std::string> contract_names = {}) {
    grid.validate();
    const int n = static_cast<int>(contracts.size());
    ContractSet::check_universe(n);
    std::vector<ContractLabel> labels;
    for (const auto& c : contracts) {
        if (c.producer.side != Side::I || c.producer.index < 0 ||
            c.producer.index >= static_cast<int>(producer_names.size()))
            throw spec_error("contract names an unknown producer");
        if (c.consumer.side != Side::J || c.consumer.index < 0 ||
            c.consumer.index >= static_cast<int>(consumer_names.size()))
            throw spec_error("contract names an unknown consumer");
        if (c.item < 0 || c.item >= static_cast<int>(templates.size())) throw spec_error("contract names an unknown template");
        if (c.price < 0 || c.price >= grid.size()) throw spec_error("contract price outside the grid");
        labels.push_back({c.producer, c.consumer});
    }
    std::map<AgentId, ChoiceSpec> side_i, side_j;
    for (const auto& [agent, spec] : agents) (agent.side == Side::I ? side_i : side_j).emplace(agent, spec);

    MEconomy e;
    e.instance.universe = n;
    e.instance.names = contract_names.empty() ? default_names(n) : std::move(contract_names);
    e.instance.agents_i = std::move(producer_names);
    e.instance.agents_j = std::move(consumer_names);
    e.instance.f1 = aggregate_side(side_i, owners_on(labels, Side::I));
    e.instance.f2 = aggregate_side(side_j, owners_on(labels, Side::J));
    e.instance.labels = std::move(labels);
    e.contracts = std::move(contracts);
    e.grid = std::move(grid);
    e.templates = std::move(templates);
    e.agents = std::move(agents);
    return e;
}

/// Contracts of `slice`, in increasing id order (the agent-local indexing).
inline std::vector<MarketContract> local_contracts(const std::vector<MarketContract>& all, ContractSet slice) {
    std::vector<MarketContract> out;
    for (ContractId x : slice) out.push_back(all.at(static_cast<std::size_t>(x)));
    return out;
}

/// Producer with constant unit cost per template: keeps exactly the offered
/// contracts whose price covers the cost. `unit_cost[t]` is on the grid's
/// value scale.
inline ChoiceSpec build_linear_producer(std::span<const MarketContract> slice, const PriceGrid& grid,
                                        const std::vector<std::int64_t>& unit_cost) {
    for (const auto& c : slice) {
        if (c.item < 0 || static_cast<std::size_t>(c.item) >= unit_cost.size())
            throw spec_error("linear producer has no unit cost for template " + std::to_string(c.item));
    }
    const int k = static_cast<int>(slice.size());
    return table_from(k, [&](ContractSet a) {
        ContractSet out;
        for (ContractId x : a) {
            const auto& c = slice[static_cast<std::size_t>(x)];
            if (grid.value(c.price) >= unit_cost[static_cast<std::size_t>(c.item)]) out.insert(x);
        }
        return out;
    });
}

/// Consumer wanting at most one unit of each template: keeps, per template,
/// the cheapest offered contract priced at or below its willingness to pay,
/// breaking price ties towards the lower id.
inline ChoiceSpec build_unit_demand_consumer(std::span<const MarketContract> slice, const PriceGrid& grid,
                                             const std::vector<std::int64_t>& willingness) {
    for (const auto& c : slice) {
        if (c.item < 0 || static_cast<std::size_t>(c.item) >= willingness.size())
            throw spec_error("unit-demand consumer has no willingness to pay for template " + std::to_string(c.item));
    }
    const int k = static_cast<int>(slice.size());
    return table_from(k, [&](ContractSet a) {
        std::map<int, ContractId> best;  // template -> cheapest affordable
        for (ContractId x : a) {
            const auto& c = slice[static_cast<std::size_t>(x)];
            if (grid.value(c.price) > willingness[static_cast<std::size_t>(c.item)]) continue;
            auto it = best.find(c.item);
            if (it == best.end() || c.price < slice[static_cast<std::size_t>(it->second)].price) best[c.item] = x;
        }
        ContractSet out;
        for (const auto& [item, x] : best) out.insert(x);
        return out;
    });
}

// --- no-shortage ----------------------------------------------------------

struct MissingTuple {
    int producer = 0;
    int consumer = 0;
    int item = 0;
    int price = 0;
};

struct UnsparedContract {
    ContractId contract = 0;
    ContractSet agreement;
};

struct NoShortageReport {
    std::vector<MissingTuple> missing;      // part 1
    std::vector<UnsparedContract> unspared; // part 2
    bool ok() const noexcept { return missing.empty() && unspared.empty(); }
};

/// Part 1: every (producer, consumer, template, price) tuple has a contract.
/// Part 2: every contract inside a supplied stable agreement has an
/// identical-terms twin outside it.
inline NoShortageReport check_no_shortage(const MEconomy& e, std::span<const ContractSet> agreements) {
    NoShortageReport r;
    for (int i = 0; i < e.producers(); ++i) {
        for (int j = 0; j < e.consumers(); ++j) {
            for (int t = 0; t < static_cast<int>(e.templates.size()); ++t) {
                for (int p = 0; p < e.grid.size(); ++p) {
                    const MarketContract want{{Side::I, i}, {Side::J, j}, t, p};
                    const bool present = std::any_of(e.contracts.begin(), e.contracts.end(),
                                                     [&](const MarketContract& c) { return c.same_terms(want); });
                    if (!present) r.missing.push_back({i, j, t, p});
                }
            }
        }
    }
    for (const ContractSet& a : agreements) {
        for (ContractId x : a) {
            bool spared = false;
            for (ContractId y = 0; y < e.instance.universe && !spared; ++y) {
                spared = !a.contains(y) && e.contract(y).same_terms(e.contract(x));
            }
            if (!spared) r.unspared.push_back({x, a});
        }
    }
    return r;
}

// --- money monotonicity ---------------------------------------------------

inline constexpr int kMoneyScanBound = 16;

struct MoneyViolation {
    AgentId agent;
    ContractSet offered;  // A ∩ X_a, global ids
    ContractId lower = 0;   // x: cheaper of the pair
    ContractId higher = 0;  // y: dearer of the pair
};

struct MoneyReport {
    std::vector<MoneyViolation> producer;
    std::vector<MoneyViolation> consumer;
    bool ok() const noexcept { return producer.empty() && consumer.empty(); }
};

/// For same-template x, y with x cheaper:
///   producer: x ∈ f_i(A) implies y ∈ f_i(A ∪ {y})
///   consumer: y ∈ f_j(A) implies x ∈ f_j(A ∪ {x})
/// checked for every A on every agent's slice.
inline MoneyReport check_money_monotone(const MEconomy& e, std::size_t max_reports = 32) {
    MoneyReport r;
    for (const auto& [agent, spec] : e.agents) {
        const ContractSet slice = e.slice(agent);
        const int k = slice.size();
        if (k > kMoneyScanBound)
            throw size_error("agent " + agent.to_string() + " owns " + std::to_string(k) + " contracts", k,
                             kMoneyScanBound);
        const auto local = local_contracts(e.contracts, slice);
        const auto global = slice.ids();
        auto& out = agent.side == Side::I ? r.producer : r.consumer;
        for_each_subset(k, [&](ContractSet a) {
            const ContractSet fa = spec(a);
            for (int x = 0; x < k; ++x) {
                for (int y = 0; y < k; ++y) {
                    if (out.size() >= max_reports) return;
                    const auto& cx = local[static_cast<std::size_t>(x)];
                    const auto& cy = local[static_cast<std::size_t>(y)];
                    if (cx.item != cy.item || !(cx.price < cy.price)) continue;
                    const bool violated = agent.side == Side::I ? fa.contains(x) && !spec(a.with(y)).contains(y)
                                                                : fa.contains(y) && !spec(a.with(x)).contains(x);
                    if (violated)
                        out.push_back({agent, expand(a, slice), global[static_cast<std::size_t>(x)],
                                       global[static_cast<std::size_t>(y)]});
                }
            }
        });
    }
    return r;
}

// --- law of two prices ----------------------------------------------------

struct PriceGap {
    ContractId low = 0;   // cheaper contract
    ContractId high = 0;  // dearer contract
    int between = 0;      // a grid level strictly between their prices
};

struct TwoPricesReport {
    std::vector<PriceGap> gaps;
    /// Set when the result's hypotheses (A stable, economy conforming)
    /// were not established by the caller; the verdict is then informative only.
    bool advisory = true;
    bool ok() const noexcept { return gaps.empty(); }
};

/// Flags every same-template pair in A whose grid levels are not adjacent.
inline TwoPricesReport check_two_prices(const MEconomy& e, ContractSet a, bool hypotheses_verified = false) {
    TwoPricesReport r;
    r.advisory = !hypotheses_verified;
    for (ContractId x : a) {
        for (ContractId y : a) {
            const auto& cx = e.contract(x);
            const auto& cy = e.contract(y);
            if (cx.item == cy.item && cy.price - cx.price >= 2) r.gaps.push_back({x, y, cx.price + 1});
        }
    }
    return r;
}

/// For a price gap (x cheaper than y, same template) inside A, finds a
/// contract z ∉ A from x's producer to y's consumer at the in-between
/// level that both sides would add to A. Returns nullopt if none blocks.
inline std::optional<ContractId> mid_price_blocker(const MEconomy& e, ContractSet a, const PriceGap& gap) {
    const auto& cx = e.contract(gap.low);
    const auto& cy = e.contract(gap.high);
    const MarketContract want{cx.producer, cy.consumer, cx.item, gap.between};
    for (ContractId z = 0; z < e.instance.universe; ++z) {
        if (a.contains(z) || !e.contract(z).same_terms(want)) continue;
        if (blocks(e.instance, a, z)) return z;
    }
    return std::nullopt;
}

} // namespace cmatch
