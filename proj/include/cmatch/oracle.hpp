#pragma once

// Brute-force ground truth for small instances. Nothing here calls into the
// deferred-acceptance engine: stable agreements are found by scanning all
// 2^n subsets, lattice bounds by searching the catalog's relation matrix,
// and marriage matchings by a textbook Gale-Shapley.

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "cmatch/axioms.hpp"
#include "cmatch/instance.hpp"
#include "cmatch/preference.hpp"

namespace cmatch {

inline constexpr int kOracleBound = 16;

/// All stable agreements of an instance and the ≤_1 relation among them.
struct StableSetCatalog {
    std::vector<ContractSet> agreements;  // increasing mask order
    /// below[a][b] is true iff agreements[a] ≤_1 agreements[b].
    std::vector<std::vector<char>> below;

    std::size_t size() const noexcept { return agreements.size(); }

    std::optional<std::size_t> index_of(ContractSet s) const {
        auto it = std::lower_bound(agreements.begin(), agreements.end(), s);
        if (it == agreements.end() || *it != s) return std::nullopt;
        return static_cast<std::size_t>(it - agreements.begin());
    }

    bool leq(std::size_t a, std::size_t b) const { return below[a][b] != 0; }
};

enum class OracleMode { singleton, full };

namespace detail {

inline bool oracle_stable(const Tabulated& f1, const Tabulated& f2, ContractSet a, OracleMode mode) {
    const ContractSet outside = f1.full() - a;
    if (mode == OracleMode::singleton) {
        for (ContractId x : outside) {
            const ContractSet ax = a.with(x);
            if (f1(ax).contains(x) && f2(ax).contains(x)) return false;
        }
        return true;
    }
    bool stable = true;
    for_each_subset(outside, [&](ContractSet b) {
        if (!stable || b.empty()) return;
        if (b.subset_of(f1(a | b) & f2(a | b))) stable = false;
    });
    return stable;
}

} // namespace detail

/// Scans every subset for agreements (fixpoints of both sides) that no
/// outside contract (singleton mode) or outside set (full mode) blocks.
inline StableSetCatalog enumerate_stable_agreements(const Instance& inst, OracleMode mode = OracleMode::singleton) {
    detail::require_bound(inst.universe, kOracleBound, "enumerate_stable_agreements");
    const Tabulated f1(inst.f1);
    const Tabulated f2(inst.f2);
    StableSetCatalog cat;
    for_each_subset(inst.universe, [&](ContractSet a) {
        if (f1(a) != a || f2(a) != a) return;
        if (detail::oracle_stable(f1, f2, a, mode)) cat.agreements.push_back(a);
    });
    const std::size_t k = cat.agreements.size();
    cat.below.assign(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            cat.below[i][j] = prefers(f1, cat.agreements[j], cat.agreements[i]).holds ? 1 : 0;
        }
    }
    return cat;
}

/// Unique ≤_1-greatest catalog element below both b and c, if one exists.
inline std::optional<ContractSet> brute_glb(const StableSetCatalog& cat, ContractSet b, ContractSet c) {
    const auto ib = cat.index_of(b);
    const auto ic = cat.index_of(c);
    if (!ib || !ic) return std::nullopt;
    std::vector<std::size_t> lower;
    for (std::size_t d = 0; d < cat.size(); ++d) {
        if (cat.leq(d, *ib) && cat.leq(d, *ic)) lower.push_back(d);
    }
    std::optional<ContractSet> found;
    for (std::size_t d : lower) {
        const bool greatest = std::all_of(lower.begin(), lower.end(), [&](std::size_t e) { return cat.leq(e, d); });
        if (greatest) {
            if (found && *found != cat.agreements[d]) return std::nullopt;
            found = cat.agreements[d];
        }
    }
    return found;
}

/// Unique ≤_1-least catalog element above both b and c, if one exists.
inline std::optional<ContractSet> brute_lub(const StableSetCatalog& cat, ContractSet b, ContractSet c) {
    const auto ib = cat.index_of(b);
    const auto ic = cat.index_of(c);
    if (!ib || !ic) return std::nullopt;
    std::vector<std::size_t> upper;
    for (std::size_t d = 0; d < cat.size(); ++d) {
        if (cat.leq(*ib, d) && cat.leq(*ic, d)) upper.push_back(d);
    }
    std::optional<ContractSet> found;
    for (std::size_t d : upper) {
        const bool least = std::all_of(upper.begin(), upper.end(), [&](std::size_t e) { return cat.leq(d, e); });
        if (least) {
            if (found && *found != cat.agreements[d]) return std::nullopt;
            found = cat.agreements[d];
        }
    }
    return found;
}

/// Unique ≤_1-maximum of the catalog, if any.
inline std::optional<ContractSet> brute_top(const StableSetCatalog& cat) {
    std::optional<ContractSet> found;
    for (std::size_t d = 0; d < cat.size(); ++d) {
        bool top = true;
        for (std::size_t e = 0; e < cat.size() && top; ++e) top = cat.leq(e, d);
        if (top) {
            if (found) return std::nullopt;
            found = cat.agreements[d];
        }
    }
    return found;
}

/// Man-proposing deferred acceptance over complete strict lists.
/// Returns (man, woman) pairs sorted by man.
inline std::vector<std::pair<int, int>> classical_gale_shapley(const std::vector<std::vector<int>>& men_prefs,
                                                               const std::vector<std::vector<int>>& women_prefs) {
    const int men = static_cast<int>(men_prefs.size());
    const int women = static_cast<int>(women_prefs.size());
    // rank[w][m]: position of m in w's list, lower is better
    std::vector<std::vector<int>> rank(static_cast<std::size_t>(women), std::vector<int>(static_cast<std::size_t>(men)));
    for (int w = 0; w < women; ++w) {
        for (int pos = 0; pos < men; ++pos) rank[w][static_cast<std::size_t>(women_prefs[w][pos])] = pos;
    }
    std::vector<int> next(static_cast<std::size_t>(men), 0);
    std::vector<int> fiance(static_cast<std::size_t>(women), -1);
    std::deque<int> free_men;
    for (int m = 0; m < men; ++m) free_men.push_back(m);

    while (!free_men.empty()) {
        const int m = free_men.front();
        free_men.pop_front();
        if (next[m] >= women) continue;  // exhausted his list; stays single
        const int w = men_prefs[m][next[m]++];
        const int current = fiance[w];
        if (current < 0) {
            fiance[w] = m;
        } else if (rank[w][m] < rank[w][current]) {
            fiance[w] = m;
            free_men.push_back(current);
        } else {
            free_men.push_back(m);
        }
    }

    std::vector<std::pair<int, int>> pairs;
    for (int w = 0; w < women; ++w) {
        if (fiance[w] >= 0) pairs.emplace_back(fiance[w], w);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

} // namespace cmatch
