#pragma once

// Exhaustive validators for the coherence axioms (Contraction, Irrelevance of
// Rejected Contracts, Substitutes) and their equivalent formulations.
//
// Every check tabulates f once and then scans subsets. Costs: Contraction
// and IRC are O(2^n * n); Substitutes walks all (B ⊆ A) pairs, O(3^n); Path
// Independence walks all (A, B) pairs, O(4^n).

#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cmatch/choice.hpp"

namespace cmatch {

/// Size bounds for exhaustive scans, overridable through the environment
/// variables CMATCH_LINEAR_BOUND and CMATCH_PAIRWISE_BOUND.
struct CheckLimits {
    int linear_bound = 12;    // Contraction, IRC, LM
    int pairwise_bound = 10;  // Substitutes, Path Independence, coherence
    std::size_t max_reports = 32;

    static CheckLimits from_env() {
        CheckLimits limits;
        auto read = [](const char* name, int& slot) {
            if (const char* raw = std::getenv(name)) {
                char* end = nullptr;
                const long v = std::strtol(raw, &end, 10);
                if (end != raw && *end == '\0' && v >= 0 && v <= kMaxTableUniverse) slot = static_cast<int>(v);
            }
        };
        read("CMATCH_LINEAR_BOUND", limits.linear_bound);
        read("CMATCH_PAIRWISE_BOUND", limits.pairwise_bound);
        return limits;
    }
};

enum class Axiom {
    contraction,
    irc,
    local_monotonicity,
    substitutes,
    path_independence,
};

inline const char* axiom_name(Axiom a) {
    switch (a) {
    case Axiom::contraction: return "Contraction";
    case Axiom::irc: return "IRC";
    case Axiom::local_monotonicity: return "LocalMonotonicity";
    case Axiom::substitutes: return "Substitutes";
    case Axiom::path_independence: return "PathIndependence";
    }
    return "?";
}

/// A concrete counterexample to one axiom.
///
/// Witness roles per axiom:
///   Contraction        a = A with f(A) ⊄ A
///   IRC                a = A, x ∈ A - f(A) with f(A - {x}) ⊄ f(A)
///   LocalMonotonicity  a = A, b = B with f(A) ⊆ B ⊆ A and f(B) ⊄ f(A)
///   Substitutes        a = A, b = B ⊆ A, x ∈ B ∩ f(A) with x ∉ f(B)
///   PathIndependence   a = A, b = B with f(A ∪ B) ≠ f(f(A) ∪ B)
struct ViolationReport {
    Axiom axiom = Axiom::contraction;
    ContractSet a;
    ContractSet b;
    std::optional<ContractId> x;

    std::string render() const {
        std::ostringstream os;
        os << axiom_name(axiom) << " violated: A=" << a.to_string();
        if (axiom == Axiom::local_monotonicity || axiom == Axiom::substitutes || axiom == Axiom::path_independence)
            os << " B=" << b.to_string();
        if (x) os << " x=" << *x;
        return os.str();
    }

    friend bool operator==(const ViolationReport&, const ViolationReport&) = default;
};

/// Re-evaluates f on a report's witnesses; true iff the violation reproduces.
inline bool replay(const ChoiceSpec& f, const ViolationReport& r) {
    switch (r.axiom) {
    case Axiom::contraction:
        return !f(r.a).subset_of(r.a);
    case Axiom::irc:
        return r.x && r.a.contains(*r.x) && !f(r.a).contains(*r.x) && !f(r.a.without(*r.x)).subset_of(f(r.a));
    case Axiom::local_monotonicity:
        return f(r.a).subset_of(r.b) && r.b.subset_of(r.a) && !f(r.b).subset_of(f(r.a));
    case Axiom::substitutes:
        return r.x && r.b.subset_of(r.a) && r.b.contains(*r.x) && f(r.a).contains(*r.x) && !f(r.b).contains(*r.x);
    case Axiom::path_independence:
        return f(r.a | r.b) != f(f(r.a) | r.b);
    }
    return false;
}

/// A choice function frozen into a lookup table.
class Tabulated {
public:
    explicit Tabulated(const ChoiceSpec& f) : n_(f.universe()), rows_(tabulate(f)) {}
    Tabulated(int n, std::vector<ContractSet> rows) : n_(n), rows_(std::move(rows)) {}

    int universe() const noexcept { return n_; }
    ContractSet operator()(ContractSet a) const { return rows_[a.mask()]; }
    ContractSet full() const { return ContractSet::full(n_); }
    const std::vector<ContractSet>& rows() const noexcept { return rows_; }

private:
    int n_;
    std::vector<ContractSet> rows_;
};

namespace detail {

inline void require_bound(int n, int bound, const char* check) {
    if (n > bound)
        throw size_error(std::string(check) + ": universe of " + std::to_string(n) +
                             " contracts exceeds exhaustive bound " + std::to_string(bound),
                         n, bound);
}

class Collector {
public:
    explicit Collector(std::size_t cap) : cap_(cap == 0 ? 1 : cap) {}
    bool full() const noexcept { return out_.size() >= cap_; }
    void add(ViolationReport r) { out_.push_back(r); }
    std::vector<ViolationReport> take() { return std::move(out_); }

private:
    std::size_t cap_;
    std::vector<ViolationReport> out_;
};

} // namespace detail

// --- checks on tabulated functions -----------------------------------------

inline std::vector<ViolationReport> check_contraction(const Tabulated& f, std::size_t max_reports = 32) {
    detail::Collector out(max_reports);
    for_each_subset(f.universe(), [&](ContractSet a) {
        if (!out.full() && !f(a).subset_of(a)) out.add({Axiom::contraction, a, f(a), std::nullopt});
    });
    return out.take();
}

inline std::vector<ViolationReport> check_irc(const Tabulated& f, std::size_t max_reports = 32) {
    detail::Collector out(max_reports);
    for_each_subset(f.universe(), [&](ContractSet a) {
        const ContractSet fa = f(a);
        for (ContractId x : a - fa) {
            if (out.full()) return;
            if (!f(a.without(x)).subset_of(fa)) out.add({Axiom::irc, a, a.without(x), x});
        }
    });
    return out.take();
}

/// Local Monotonicity: f(A) ⊆ B ⊆ A implies f(B) ⊆ f(A). Equivalent to IRC.
inline std::vector<ViolationReport> check_local_monotonicity(const Tabulated& f, std::size_t max_reports = 32) {
    detail::Collector out(max_reports);
    for_each_subset(f.universe(), [&](ContractSet a) {
        const ContractSet fa = f(a);
        if (!fa.subset_of(a)) return;
        // B ranges over fa ∪ (any subset of a - fa)
        for_each_subset(a - fa, [&](ContractSet extra) {
            if (out.full()) return;
            const ContractSet b = fa | extra;
            if (!f(b).subset_of(fa)) out.add({Axiom::local_monotonicity, a, b, std::nullopt});
        });
    });
    return out.take();
}

/// The interchangeable formulations of the Substitutes axiom.
enum class SubstitutesForm {
    /// x ∈ B ⊆ A and x ∈ f(A) imply x ∈ f(B)
    original,
    /// B ⊆ A and x ∈ f({x} ∪ A) imply x ∈ f({x} ∪ B), for any x
    extension,
    /// B ⊆ A implies B ∩ f(A) ⊆ f(B)
    intersection,
    /// x ∈ B ⊆ A and x ∉ f(B) imply x ∉ f(A)
    rejection,
};

inline std::vector<ViolationReport> check_substitutes(const Tabulated& f,
                                                      SubstitutesForm form = SubstitutesForm::intersection,
                                                      std::size_t max_reports = 32) {
    detail::Collector out(max_reports);
    const ContractSet universe = f.full();
    for_each_subset(universe, [&](ContractSet a) {
        if (out.full()) return;
        const ContractSet fa = f(a);
        for_each_subset(a, [&](ContractSet b) {
            if (out.full()) return;
            switch (form) {
            case SubstitutesForm::original:
                for (ContractId x : b) {
                    if (fa.contains(x) && !f(b).contains(x)) {
                        out.add({Axiom::substitutes, a, b, x});
                        return;
                    }
                }
                break;
            case SubstitutesForm::intersection: {
                const ContractSet missing = (b & fa) - f(b);
                if (!missing.empty()) out.add({Axiom::substitutes, a, b, missing.first()});
                break;
            }
            case SubstitutesForm::rejection:
                for (ContractId x : b) {
                    if (!f(b).contains(x) && fa.contains(x)) {
                        out.add({Axiom::substitutes, a, b, x});
                        return;
                    }
                }
                break;
            case SubstitutesForm::extension:
                for (ContractId x : universe) {
                    if (f(a.with(x)).contains(x) && !f(b.with(x)).contains(x)) {
                        out.add({Axiom::substitutes, a.with(x), b.with(x), x});
                        return;
                    }
                }
                break;
            }
        });
    });
    return out.take();
}

/// The two equivalent Path Independence conditions.
enum class PathIndependenceForm {
    /// f(A ∪ B) = f(f(A) ∪ B)
    one_side,
    /// f(A ∪ B) = f(f(A) ∪ f(B))
    both_sides,
};

inline std::vector<ViolationReport> check_path_independence(
    const Tabulated& f, PathIndependenceForm form = PathIndependenceForm::one_side, std::size_t max_reports = 32) {
    detail::Collector out(max_reports);
    for_each_subset(f.universe(), [&](ContractSet a) {
        if (out.full()) return;
        const ContractSet fa = f(a);
        for_each_subset(f.universe(), [&](ContractSet b) {
            if (out.full()) return;
            const ContractSet rhs = form == PathIndependenceForm::one_side ? f(fa | b) : f(fa | f(b));
            if (f(a | b) != rhs) out.add({Axiom::path_independence, a, b, std::nullopt});
        });
    });
    return out.take();
}

// --- checks on specs, with size bounds -------------------------------------

inline std::vector<ViolationReport> check_contraction(const ChoiceSpec& f, const CheckLimits& limits = {}) {
    detail::require_bound(f.universe(), limits.linear_bound, "check_contraction");
    return check_contraction(Tabulated(f), limits.max_reports);
}

inline std::vector<ViolationReport> check_irc(const ChoiceSpec& f, const CheckLimits& limits = {}) {
    detail::require_bound(f.universe(), limits.linear_bound, "check_irc");
    return check_irc(Tabulated(f), limits.max_reports);
}

inline std::vector<ViolationReport> check_local_monotonicity(const ChoiceSpec& f, const CheckLimits& limits = {}) {
    detail::require_bound(f.universe(), limits.pairwise_bound, "check_local_monotonicity");
    return check_local_monotonicity(Tabulated(f), limits.max_reports);
}

inline std::vector<ViolationReport> check_substitutes(const ChoiceSpec& f, const CheckLimits& limits = {},
                                                      SubstitutesForm form = SubstitutesForm::intersection) {
    detail::require_bound(f.universe(), limits.pairwise_bound, "check_substitutes");
    return check_substitutes(Tabulated(f), form, limits.max_reports);
}

inline std::vector<ViolationReport> check_path_independence(
    const ChoiceSpec& f, const CheckLimits& limits = {}, PathIndependenceForm form = PathIndependenceForm::one_side) {
    detail::require_bound(f.universe(), limits.pairwise_bound, "check_path_independence");
    return check_path_independence(Tabulated(f), form, limits.max_reports);
}

/// Outcome of a full coherence check.
struct CoherenceReport {
    std::vector<ViolationReport> contraction;
    std::vector<ViolationReport> irc;
    std::vector<ViolationReport> substitutes;
    std::vector<ViolationReport> path_independence;
    /// Contraction + Path Independence disagreed with the three-axiom verdict.
    /// Plott's lemma makes them equivalent, so this flags a checker bug.
    bool checker_disagreement = false;

    bool coherent() const noexcept { return contraction.empty() && irc.empty() && substitutes.empty(); }

    /// First violation in axiom order, if any.
    std::optional<ViolationReport> first_violation() const {
        for (const auto* list : {&contraction, &irc, &substitutes}) {
            if (!list->empty()) return list->front();
        }
        return std::nullopt;
    }
};

inline CoherenceReport check_coherent(const Tabulated& f, std::size_t max_reports = 32) {
    CoherenceReport r;
    r.contraction = check_contraction(f, max_reports);
    r.irc = check_irc(f, max_reports);
    r.substitutes = check_substitutes(f, SubstitutesForm::intersection, max_reports);
    r.path_independence = check_path_independence(f, PathIndependenceForm::one_side, max_reports);
    const bool plott = r.contraction.empty() && r.path_independence.empty();
    r.checker_disagreement = plott != r.coherent();
    return r;
}

inline CoherenceReport check_coherent(const ChoiceSpec& f, const CheckLimits& limits = {}) {
    detail::require_bound(f.universe(), limits.pairwise_bound, "check_coherent");
    return check_coherent(Tabulated(f), limits.max_reports);
}

} // namespace cmatch
