#pragma once

// Revealed preferences of a choice function.
//
//   B ≤_f A   iff  f(A ∪ B) = f(A)            ("A is at least as good as B")
//   A ~_f B   iff  f(A) = f(B)
//   I_f(A)    =    A ∪ { x ∉ A : x ∉ f({x} ∪ A) }
//
// ≤_f is a pre-order only when f is coherent; on other functions the
// results follow the definitions but carry no guarantees. Define
// CMATCH_DEBUG_CHECKS to cross-check the equivalent characterizations on
// every query.

#include <cassert>
#include <concepts>

#include "cmatch/axioms.hpp"
#include "cmatch/choice.hpp"

namespace cmatch {

/// Anything that maps subsets of a fixed universe to subsets.
template <typename F>
concept ChoiceLike = requires(const F& f, ContractSet a) {
    { f(a) } -> std::convertible_to<ContractSet>;
    { f.universe() } -> std::convertible_to<int>;
};

/// What is known about a function's coherence.
enum class CoherenceStatus { unknown, asserted, verified, violated };

inline const char* status_name(CoherenceStatus s) {
    switch (s) {
    case CoherenceStatus::unknown: return "unknown";
    case CoherenceStatus::asserted: return "asserted";
    case CoherenceStatus::verified: return "verified";
    case CoherenceStatus::violated: return "violated";
    }
    return "?";
}

struct PreferenceVerdict {
    bool holds = false;
    /// f(A ∪ B); the relation holds iff this equals f(A).
    ContractSet witness;
    /// False when f was not known to be coherent, in which case the
    /// pre-order properties (transitivity etc.) may fail.
    bool coherence_known = false;
};

/// B ≤_f A, spelled leq(f, B, A).
template <ChoiceLike F>
bool leq(const F& f, ContractSet lower, ContractSet upper) {
    const ContractSet joint = f(upper | lower);
    const bool holds = joint == f(upper);
#ifdef CMATCH_DEBUG_CHECKS
    assert(holds == joint.subset_of(f(upper)));
    assert(holds == joint.subset_of(upper));
#endif
    return holds;
}

/// Whether f weakly prefers `a` to `b` (b ≤_f a).
template <ChoiceLike F>
PreferenceVerdict prefers(const F& f, ContractSet a, ContractSet b,
                          CoherenceStatus status = CoherenceStatus::unknown) {
    detail::check_in_universe(a, f.universe());
    detail::check_in_universe(b, f.universe());
    PreferenceVerdict v;
    v.witness = f(a | b);
    v.holds = v.witness == f(a);
    v.coherence_known = status == CoherenceStatus::verified || status == CoherenceStatus::asserted;
#ifdef CMATCH_DEBUG_CHECKS
    if (v.coherence_known) {
        assert(v.holds == v.witness.subset_of(f(a)));
        assert(v.holds == v.witness.subset_of(a));
    }
#endif
    return v;
}

/// A ~_f B, computed as f(A) = f(B).
template <ChoiceLike F>
bool indifferent(const F& f, ContractSet a, ContractSet b) {
    detail::check_in_universe(a, f.universe());
    detail::check_in_universe(b, f.universe());
    const bool same = f(a) == f(b);
#ifdef CMATCH_DEBUG_CHECKS
    assert(same == (leq(f, a, b) && leq(f, b, a)));
#endif
    return same;
}

/// I_f(A): A plus every outside contract f would reject if offered on top of A.
template <ChoiceLike F>
ContractSet closure(const F& f, ContractSet a) {
    detail::check_in_universe(a, f.universe());
    ContractSet out = a;
    for (ContractId x : ContractSet::full(f.universe()) - a) {
        if (!f(a.with(x)).contains(x)) out.insert(x);
    }
    return out;
}

} // namespace cmatch
