#pragma once

// Choice functions f : 2^X -> 2^X over a small contract universe.
//
// A ChoiceSpec is a declarative, immutable description of a choice function
// plus its evaluator. Every variant except Table is contractive by
// construction; Table returns whatever was stored, so deliberately bad
// functions can be fed to the axiom checkers.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "cmatch/agents.hpp"
#include "cmatch/contract_set.hpp"
#include "cmatch/errors.hpp"

namespace cmatch {

// Compare against Rational{}, never a bare int: with C++20 rewritten
// comparisons Boost 1.74 rational == int recurses forever.
using Rational = boost::rational<std::int64_t>;

/// Largest universe for which a choice function may be stored as a full table.
inline constexpr int kMaxTableUniverse = 20;

class ChoiceSpec;

/// Explicit map from every subset (indexed by mask) to its choice.
struct TableChoice {
    int universe = 0;
    std::vector<ContractSet> rows;
    friend bool operator==(const TableChoice&, const TableChoice&) = default;
};

struct IdentityChoice {
    int universe = 0;
    friend bool operator==(const IdentityChoice&, const IdentityChoice&) = default;
};

/// Picks the single best available contract of a strict order (best first).
/// Defined only on subsets of the order's support.
struct TopOfOrderChoice {
    int universe = 0;
    std::vector<ContractId> order;
    friend bool operator==(const TopOfOrderChoice&, const TopOfOrderChoice&) = default;
};

/// Keeps the `quota` best available contracts of a strict order.
struct ResponsiveQuotaChoice {
    int universe = 0;
    std::vector<ContractId> order;
    int quota = 0;
    friend bool operator==(const ResponsiveQuotaChoice&, const ResponsiveQuotaChoice&) = default;
};

/// Per-contract price deductions used to make a valuation's argmax unique.
struct PerturbationScheme {
    Rational epsilon{1};
    std::vector<Rational> prices;
    friend bool operator==(const PerturbationScheme&, const PerturbationScheme&) = default;
};

/// Argmax of a perturbed subset valuation. The argmax table is precomputed
/// at construction and shared between copies.
struct ValuationChoice {
    int universe = 0;
    std::vector<Rational> values;  // indexed by subset mask
    PerturbationScheme scheme;
    std::shared_ptr<const std::vector<ContractSet>> argmax;

    friend bool operator==(const ValuationChoice& a, const ValuationChoice& b) {
        return a.universe == b.universe && a.values == b.values && a.scheme == b.scheme;
    }
};

/// f(A) = the set of tops of A, one per listed order.
struct UnionOfOrdersChoice {
    int universe = 0;
    std::vector<std::vector<ContractId>> orders;
    friend bool operator==(const UnionOfOrdersChoice&, const UnionOfOrdersChoice&) = default;
};

/// One agent's contribution to a side-level choice function. `spec` is
/// defined over the agent's slice, re-indexed to 0..|slice|-1 in increasing
/// global id order.
struct AgentPart;

/// f(A) = union over agents of f_a(A ∩ X_a).
struct AggregateChoice {
    int universe = 0;
    std::vector<AgentPart> parts;
    friend bool operator==(const AggregateChoice&, const AggregateChoice&);
};

class ChoiceSpec {
public:
    using Variant = std::variant<TableChoice, IdentityChoice, TopOfOrderChoice, ResponsiveQuotaChoice,
                                 ValuationChoice, UnionOfOrdersChoice, AggregateChoice>;

    ChoiceSpec() : v_(IdentityChoice{}) {}
    template <typename T>
        requires std::is_constructible_v<Variant, T&&>
    ChoiceSpec(T&& v) : v_(std::forward<T>(v)) {}

    const Variant& variant() const noexcept { return v_; }

    template <typename T>
    const T* as() const noexcept { return std::get_if<T>(&v_); }

    int universe() const noexcept {
        return std::visit([](const auto& c) { return c.universe; }, v_);
    }

    /// Variant tag as used in instance files.
    const char* kind() const noexcept;

    /// f(A). Throws domain_error if A is outside the universe (or outside
    /// the declared domain of an order-based variant).
    ContractSet operator()(ContractSet a) const;

    friend bool operator==(const ChoiceSpec&, const ChoiceSpec&) = default;

private:
    Variant v_;
};

struct AgentPart {
    AgentId agent;
    ContractSet slice;
    ChoiceSpec spec;
    friend bool operator==(const AgentPart&, const AgentPart&) = default;
};

inline bool operator==(const AggregateChoice& a, const AggregateChoice& b) {
    return a.universe == b.universe && a.parts == b.parts;
}

/// f(A) for a spec. Free-function spelling of ChoiceSpec::operator().
inline ContractSet choose(const ChoiceSpec& f, ContractSet a) { return f(a); }

// ---------------------------------------------------------------------------
// construction

namespace detail {

inline void check_universe_size(int n, int bound, const char* what) {
    if (n < 0 || n > bound)
        throw spec_error(std::string(what) + ": universe size " + std::to_string(n) + " outside [0, " +
                         std::to_string(bound) + "]");
}

inline ContractSet order_support(int universe, const std::vector<ContractId>& order, const char* what) {
    ContractSet seen;
    for (ContractId id : order) {
        if (id < 0 || id >= universe)
            throw spec_error(std::string(what) + ": contract " + std::to_string(id) + " outside universe");
        if (seen.contains(id))
            throw spec_error(std::string(what) + ": contract " + std::to_string(id) + " listed twice");
        seen.insert(id);
    }
    return seen;
}

inline void check_in_universe(ContractSet a, int universe) {
    if (!a.within(universe))
        throw domain_error("set " + a.to_string() + " not contained in universe of size " + std::to_string(universe));
}

} // namespace detail

inline ChoiceSpec identity_choice(int universe) {
    ContractSet::check_universe(universe);
    return IdentityChoice{universe};
}

/// Table with rows[mask] = f(mask). Rows need not be contractive.
inline ChoiceSpec table_choice(int universe, std::vector<ContractSet> rows) {
    detail::check_universe_size(universe, kMaxTableUniverse, "table");
    const std::size_t expected = std::size_t{1} << universe;
    if (rows.size() != expected)
        throw spec_error("table has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(expected));
    for (std::size_t m = 0; m < rows.size(); ++m) {
        if (!rows[m].within(universe))
            throw spec_error("table row " + ContractSet::from_mask(m).to_string() + " maps outside the universe");
    }
    return TableChoice{universe, std::move(rows)};
}

/// Tabulates any rule as a Table spec.
template <typename Fn>
ChoiceSpec table_from(int universe, Fn&& rule) {
    detail::check_universe_size(universe, kMaxTableUniverse, "table");
    std::vector<ContractSet> rows(std::size_t{1} << universe);
    for (std::size_t m = 0; m < rows.size(); ++m) rows[m] = rule(ContractSet::from_mask(m));
    return table_choice(universe, std::move(rows));
}

/// Single best contract under `order` (best first). The order's support is
/// the function's domain.
inline ChoiceSpec top_of_order(int universe, std::vector<ContractId> order) {
    ContractSet::check_universe(universe);
    detail::order_support(universe, order, "top_of_order");
    return TopOfOrderChoice{universe, std::move(order)};
}

inline ChoiceSpec responsive_quota(int universe, std::vector<ContractId> order, int quota) {
    ContractSet::check_universe(universe);
    detail::order_support(universe, order, "responsive_quota");
    if (quota < 0) throw spec_error("responsive_quota: negative quota");
    return ResponsiveQuotaChoice{universe, std::move(order), quota};
}

/// f(A) = { top of A under some listed order }. Each order must rank the
/// whole universe.
inline ChoiceSpec union_of_orders_choice(int universe, std::vector<std::vector<ContractId>> orders) {
    ContractSet::check_universe(universe);
    if (orders.empty()) throw spec_error("union_of_orders: at least one order required");
    for (const auto& order : orders) {
        if (detail::order_support(universe, order, "union_of_orders") != ContractSet::full(universe))
            throw spec_error("union_of_orders: order is not total on the universe");
    }
    return UnionOfOrdersChoice{universe, std::move(orders)};
}

// ---------------------------------------------------------------------------
// valuations

/// Smallest nonzero |v(A) - v(B)| over all subset pairs; zero if all values are equal.
inline Rational min_value_gap(const std::vector<Rational>& values) {
    std::vector<Rational> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Rational gap{0};
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        Rational d = sorted[i] - sorted[i - 1];
        if (gap == Rational{} || d < gap) gap = d;
    }
    return gap;
}

/// Dyadic scheme p_x = eps * 2^-(n-x). Prices strictly increase with the id,
/// so among value ties the set with lower ids wins; subset sums are
/// pairwise distinct, which makes the perturbed argmax unique.
inline PerturbationScheme dyadic_scheme(int universe, Rational epsilon) {
    PerturbationScheme s;
    s.epsilon = epsilon;
    s.prices.resize(static_cast<std::size_t>(universe));
    for (int x = 0; x < universe; ++x) {
        s.prices[static_cast<std::size_t>(x)] = epsilon / Rational(std::int64_t{1} << (universe - x));
    }
    return s;
}

/// Dyadic scheme with epsilon = m / (2n), or 1 when all values coincide.
inline PerturbationScheme dyadic_scheme(const std::vector<Rational>& values, int universe) {
    const Rational gap = min_value_gap(values);
    Rational eps = gap == Rational{} ? Rational{1} : gap / Rational(2 * std::max(universe, 1));
    return dyadic_scheme(universe, eps);
}

/// Builds the argmax-of-perturbed-valuation choice function.
///
/// u(B) = v(B) - sum_{x in B} p_x. Requires 0 <= p_x <= eps < m/n (m the
/// smallest nonzero value gap) and a unique maximizer of u over 2^A for
/// every A; otherwise throws spec_error. The chosen set then also maximizes
/// the unperturbed v.
inline ChoiceSpec valuation_choice(std::vector<Rational> values, PerturbationScheme scheme) {
    int universe = 0;
    while ((std::size_t{1} << universe) < values.size()) ++universe;
    if ((std::size_t{1} << universe) != values.size())
        throw spec_error("valuation table size " + std::to_string(values.size()) + " is not a power of two");
    detail::check_universe_size(universe, kMaxTableUniverse, "valuation");
    if (scheme.prices.size() != static_cast<std::size_t>(universe))
        throw spec_error("perturbation scheme has " + std::to_string(scheme.prices.size()) + " prices for " +
                         std::to_string(universe) + " contracts");
    if (scheme.epsilon <= Rational{}) throw spec_error("perturbation epsilon must be positive");
    for (const Rational& p : scheme.prices) {
        if (p < Rational{} || p > scheme.epsilon) throw spec_error("perturbation price outside [0, epsilon]");
    }
    const Rational gap = min_value_gap(values);
    if (gap != Rational{} && universe > 0 && !(scheme.epsilon * universe < gap))
        throw spec_error("perturbation epsilon too large: need epsilon < m/n with m = " +
                         std::to_string(gap.numerator()) + "/" + std::to_string(gap.denominator()));

    const std::size_t count = values.size();
    std::vector<Rational> perturbed(count);
    for (std::size_t m = 0; m < count; ++m) {
        Rational deduction{0};
        for (ContractId x : ContractSet::from_mask(m)) deduction += scheme.prices[static_cast<std::size_t>(x)];
        perturbed[m] = values[m] - deduction;
    }

    // best[A] over 2^A: either A itself or the best of some A - {x}. The
    // maximizer is unique iff every maximizing candidate names the same set
    // and is itself unique.
    auto argmax = std::make_shared<std::vector<ContractSet>>(count);
    std::vector<char> unique(count, 1);
    for (std::size_t m = 0; m < count; ++m) {
        const ContractSet a = ContractSet::from_mask(m);
        ContractSet best = a;
        Rational best_value = perturbed[m];
        bool best_unique = true;
        for (ContractId x : a) {
            const std::size_t sub = (a.without(x)).mask();
            const ContractSet cand = (*argmax)[sub];
            const Rational& cand_value = perturbed[cand.mask()];
            if (cand_value > best_value) {
                best = cand;
                best_value = cand_value;
                best_unique = unique[sub] != 0;
            } else if (cand_value == best_value) {
                best_unique = best_unique && unique[sub] != 0 && cand == best;
            }
        }
        (*argmax)[m] = best;
        unique[m] = best_unique ? 1 : 0;
        if (!best_unique)
            throw spec_error("perturbed valuation has several maximizers over subsets of " + a.to_string());
    }
    return ValuationChoice{universe, std::move(values), std::move(scheme), std::move(argmax)};
}

/// Same, with the default dyadic scheme.
inline ChoiceSpec valuation_choice(std::vector<Rational> values) {
    int universe = 0;
    while ((std::size_t{1} << universe) < values.size()) ++universe;
    auto scheme = dyadic_scheme(values, universe);
    return valuation_choice(std::move(values), std::move(scheme));
}

// ---------------------------------------------------------------------------
// evaluation

inline const char* ChoiceSpec::kind() const noexcept {
    struct Names {
        const char* operator()(const TableChoice&) const { return "table"; }
        const char* operator()(const IdentityChoice&) const { return "identity"; }
        const char* operator()(const TopOfOrderChoice&) const { return "top_of_order"; }
        const char* operator()(const ResponsiveQuotaChoice&) const { return "responsive_quota"; }
        const char* operator()(const ValuationChoice&) const { return "valuation"; }
        const char* operator()(const UnionOfOrdersChoice&) const { return "union_of_orders"; }
        const char* operator()(const AggregateChoice&) const { return "aggregate"; }
    };
    return std::visit(Names{}, v_);
}

namespace detail {

struct Evaluator {
    ContractSet a;

    ContractSet operator()(const TableChoice& t) const { return t.rows[a.mask()]; }

    ContractSet operator()(const IdentityChoice&) const { return a; }

    ContractSet operator()(const TopOfOrderChoice& t) const {
        ContractSet remaining = a;
        for (ContractId id : t.order) {
            if (remaining.contains(id)) return ContractSet::single(id);
        }
        return {};
    }

    ContractSet operator()(const ResponsiveQuotaChoice& r) const {
        ContractSet out;
        int kept = 0;
        for (ContractId id : r.order) {
            if (kept >= r.quota) break;
            if (a.contains(id)) {
                out.insert(id);
                ++kept;
            }
        }
        return out;
    }

    ContractSet operator()(const ValuationChoice& v) const { return (*v.argmax)[a.mask()]; }

    ContractSet operator()(const UnionOfOrdersChoice& u) const {
        ContractSet out;
        if (a.empty()) return out;
        for (const auto& order : u.orders) {
            for (ContractId id : order) {
                if (a.contains(id)) {
                    out.insert(id);
                    break;
                }
            }
        }
        return out;
    }

    ContractSet operator()(const AggregateChoice& g) const {
        ContractSet out;
        for (const AgentPart& part : g.parts) {
            const ContractSet local = compress(a & part.slice, part.slice);
            out |= expand(part.spec(local), part.slice);
        }
        return out;
    }
};

inline void check_domain(const ChoiceSpec::Variant& v, ContractSet a) {
    auto order_domain = [&](const std::vector<ContractId>& order) {
        ContractSet support;
        for (ContractId id : order) support.insert(id);
        if (!a.subset_of(support))
            throw domain_error("set " + a.to_string() + " outside the order's domain " + support.to_string());
    };
    if (const auto* t = std::get_if<TopOfOrderChoice>(&v)) order_domain(t->order);
    if (const auto* r = std::get_if<ResponsiveQuotaChoice>(&v)) order_domain(r->order);
}

} // namespace detail

inline ContractSet ChoiceSpec::operator()(ContractSet a) const {
    detail::check_in_universe(a, universe());
    detail::check_domain(v_, a);
    return std::visit(detail::Evaluator{a}, v_);
}

/// rows[mask] = f(mask) for every subset of the universe.
inline std::vector<ContractSet> tabulate(const ChoiceSpec& f) {
    const int n = f.universe();
    if (n > kMaxTableUniverse)
        throw size_error("cannot tabulate a choice function over " + std::to_string(n) + " contracts", n,
                         kMaxTableUniverse);
    if (const auto* t = f.as<TableChoice>()) return t->rows;
    std::vector<ContractSet> rows(std::size_t{1} << n);
    for (std::size_t m = 0; m < rows.size(); ++m) rows[m] = f(ContractSet::from_mask(m));
    return rows;
}

} // namespace cmatch
