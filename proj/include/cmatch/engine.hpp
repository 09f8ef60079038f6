#pragma once

// Generalized deferred acceptance and the lattice of stable agreements.
//
// From a pool Z_0 the proposing side p and the other side q iterate
//
//   Z_{j+1} = (Z_j - f_p(Z_j)) ∪ f_q(f_p(Z_j))
//
// until Z_{j+1} = Z_j, and output S = f_p(Z_f). With Contraction the pools
// shrink weakly, so a fixpoint is reached after at most |Z_0| + 1 rounds.
// With both sides coherent and Z_0 = X, S is the stable agreement that the
// proposing side prefers to every other one.

#include <optional>
#include <string>
#include <vector>

#include "cmatch/errors.hpp"
#include "cmatch/instance.hpp"
#include "cmatch/preference.hpp"

namespace cmatch {

/// One round of the iteration.
struct TraceStep {
    ContractSet pool;      // Z_j
    ContractSet offers;    // f_p(Z_j)
    ContractSet accepted;  // f_q(f_p(Z_j))
};

/// The pools Z_0 ⊇ Z_1 ⊇ ... ⊇ Z_f with per-round offers and acceptances.
/// The last step is the round that confirmed Z_{f+1} = Z_f.
struct Trace {
    int proposer = 1;
    std::vector<TraceStep> steps;

    /// Index f of the fixpoint pool.
    int fixpoint_index() const { return static_cast<int>(steps.size()) - 1; }
    /// Number of evaluations of the update rule, f + 1.
    int iterations() const { return static_cast<int>(steps.size()); }
    ContractSet final_pool() const { return steps.back().pool; }
};

struct AgreementVerdict {
    bool holds = false;
    ContractSet rejected_by_1;  // A - f1(A)
    ContractSet rejected_by_2;  // A - f2(A)
};

enum class StabilityMode { singleton, full };

struct StabilityVerdict {
    bool holds = false;
    /// Singleton mode: smallest-id x ∉ A kept by both sides on A ∪ {x}.
    std::optional<ContractId> blocking_contract;
    /// Full mode: first nonempty B (mask order) disjoint from A that both
    /// sides would keep in full on A ∪ B.
    std::optional<ContractSet> blocking_set;
};

struct StableAgreementVerdict {
    AgreementVerdict agreement;
    StabilityVerdict stability;
    bool holds() const noexcept { return agreement.holds && stability.holds; }
};

struct SolveResult {
    ContractSet outcome;  // S
    Trace trace;
    StableAgreementVerdict verdict;
    /// True when both sides were known coherent; only then do the
    /// optimality guarantees apply.
    bool guarantees_apply = false;
};

/// Largest |X - A| the full-mode stability scan accepts.
inline constexpr int kFullStabilityBound = 20;

inline AgreementVerdict is_agreement(const Instance& inst, ContractSet a) {
    detail::check_in_universe(a, inst.universe);
    AgreementVerdict v;
    v.rejected_by_1 = a - inst.f1(a);
    v.rejected_by_2 = a - inst.f2(a);
    v.holds = inst.f1(a) == a && inst.f2(a) == a;
    return v;
}

/// x blocks A when both sides keep x on A ∪ {x}.
inline bool blocks(const Instance& inst, ContractSet a, ContractId x) {
    const ContractSet ax = a.with(x);
    return inst.f1(ax).contains(x) && inst.f2(ax).contains(x);
}

inline StabilityVerdict is_stable_set(const Instance& inst, ContractSet a,
                                      StabilityMode mode = StabilityMode::singleton) {
    detail::check_in_universe(a, inst.universe);
    StabilityVerdict v;
    const ContractSet outside = inst.full() - a;
    if (mode == StabilityMode::singleton) {
        for (ContractId x : outside) {
            if (blocks(inst, a, x)) {
                v.blocking_contract = x;
                return v;
            }
        }
        v.holds = true;
        return v;
    }
    if (outside.size() > kFullStabilityBound)
        throw size_error("full-mode stability scan over 2^" + std::to_string(outside.size()) + " candidate sets",
                         outside.size(), kFullStabilityBound);
    bool blocked = false;
    for_each_subset(outside, [&](ContractSet b) {
        if (blocked || b.empty()) return;
        const ContractSet ab = a | b;
        if (b.subset_of(inst.f1(ab) & inst.f2(ab))) {
            v.blocking_set = b;
            blocked = true;
        }
    });
    v.holds = !blocked;
    return v;
}

inline StableAgreementVerdict is_stable_agreement(const Instance& inst, ContractSet a) {
    return {is_agreement(inst, a), is_stable_set(inst, a, StabilityMode::singleton)};
}

/// Runs the iteration from `pool` with side `proposer` (1 or 2) proposing.
///
/// Throws spec_error if a side returns something outside its argument
/// (the iteration is only guaranteed to terminate under Contraction).
inline SolveResult run(const Instance& inst, int proposer, ContractSet pool) {
    if (proposer != 1 && proposer != 2) throw precondition_error("proposer must be 1 or 2");
    detail::check_in_universe(pool, inst.universe);
    const ChoiceSpec& fp = inst.side(proposer);
    const ChoiceSpec& fq = inst.side(3 - proposer);

    SolveResult result;
    result.trace.proposer = proposer;
    ContractSet z = pool;
    while (true) {
        TraceStep step;
        step.pool = z;
        step.offers = fp(z);
        if (!step.offers.subset_of(z))
            throw spec_error("side " + std::to_string(proposer) + " chose contracts outside the pool " + z.to_string());
        step.accepted = fq(step.offers);
        if (!step.accepted.subset_of(step.offers))
            throw spec_error("side " + std::to_string(3 - proposer) + " chose contracts outside the offers " +
                             step.offers.to_string());
        const ContractSet next = (z - step.offers) | step.accepted;
        result.trace.steps.push_back(step);
        if (next == z) break;
        z = next;
    }
    result.outcome = fp(z);
    result.verdict = is_stable_agreement(inst, result.outcome);
    result.guarantees_apply = inst.known_coherent();
    return result;
}

inline SolveResult run(const Instance& inst, int proposer = 1) { return run(inst, proposer, inst.full()); }

namespace detail {

inline void require_stable_agreement(const Instance& inst, ContractSet s, const char* op, const char* which) {
    if (!is_stable_agreement(inst, s).holds())
        throw precondition_error(std::string(op) + ": " + which + " = " + inst.render(s) +
                                 " is not a stable agreement");
}

} // namespace detail

/// Greatest lower bound of two stable agreements under ≤_1: rerun the
/// iteration (side 1 proposing) on the pool I_1(B) ∩ I_1(C).
inline SolveResult meet_detail(const Instance& inst, ContractSet b, ContractSet c) {
    detail::require_stable_agreement(inst, b, "meet", "B");
    detail::require_stable_agreement(inst, c, "meet", "C");
    const ContractSet pool = closure(inst.f1, b) & closure(inst.f1, c);
    return run(inst, 1, pool);
}

inline ContractSet meet(const Instance& inst, ContractSet b, ContractSet c) { return meet_detail(inst, b, c).outcome; }

/// Least upper bound under ≤_1. On stable agreements ≤_1 and ≤_2 are
/// inverse, so this is the ≤_2 meet: side 2 proposes on I_2(B) ∩ I_2(C).
inline SolveResult join_detail(const Instance& inst, ContractSet b, ContractSet c) {
    detail::require_stable_agreement(inst, b, "join", "B");
    detail::require_stable_agreement(inst, c, "join", "C");
    const ContractSet pool = closure(inst.f2, b) & closure(inst.f2, c);
    return run(inst, 2, pool);
}

inline ContractSet join(const Instance& inst, ContractSet b, ContractSet c) { return join_detail(inst, b, c).outcome; }

} // namespace cmatch
