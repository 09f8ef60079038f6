#include <gtest/gtest.h>

#include "support.hpp"

using namespace cmatch;
using namespace cmatch::testing;

// --- run ---------------------------------------------------------------------

TEST(Run, IdentityKeepsThePool) {
    const Instance inst = identity_instance(4);
    const auto r = run(inst);
    EXPECT_EQ(r.outcome, inst.full());
    EXPECT_EQ(r.trace.iterations(), 1);
    EXPECT_TRUE(r.verdict.holds());
    EXPECT_TRUE(r.guarantees_apply);
    EXPECT_EQ(run(inst, 1, ContractSet{1, 3}).outcome, (ContractSet{1, 3}));
}

TEST(Run, NonexistenceTrace) {
    const Instance inst = nonexistence_instance();
    const auto r = run(inst);
    ASSERT_EQ(r.trace.steps.size(), 2u);
    EXPECT_EQ(r.trace.steps[0].pool, (ContractSet{kA, kB}));
    EXPECT_EQ(r.trace.steps[0].offers, (ContractSet{kA, kB}));
    EXPECT_EQ(r.trace.steps[0].accepted, ContractSet{kB});
    EXPECT_EQ(r.trace.steps[1].pool, ContractSet{kB});
    EXPECT_EQ(r.trace.steps[1].offers, ContractSet{});
    EXPECT_EQ(r.trace.final_pool(), ContractSet{kB});
    EXPECT_EQ(r.trace.fixpoint_index(), 1);
    EXPECT_EQ(r.outcome, ContractSet{});
    EXPECT_TRUE(r.verdict.agreement.holds);
    EXPECT_FALSE(r.verdict.stability.holds);
    EXPECT_EQ(r.verdict.stability.blocking_contract, kA);
    EXPECT_FALSE(r.verdict.holds());
    EXPECT_FALSE(r.guarantees_apply);
}

TEST(Run, MarriageMutuallyFirstEitherProposer) {
    const Instance inst = build_marriage_instance({{0, 1}, {1, 0}}, {{0, 1}, {1, 0}});
    const ContractSet expected{marriage_contract(0, 0, 2), marriage_contract(1, 1, 2)};
    EXPECT_EQ(run(inst, 1).outcome, expected);
    EXPECT_EQ(run(inst, 2).outcome, expected);
}

TEST(Run, Errors) {
    const Instance inst = identity_instance(2);
    EXPECT_THROW(run(inst, 3), precondition_error);
    EXPECT_THROW(run(inst, 1, ContractSet{2}), domain_error);
    Instance bad = inst;
    // side 1 conjures a contract that was not offered
    bad.f1 = table_choice(2, {ContractSet{1}, ContractSet{1}, ContractSet{1}, ContractSet{1}});
    EXPECT_THROW(run(bad, 1, ContractSet{0}), spec_error);
}

// --- predicates ----------------------------------------------------------------

TEST(Agreement, Examples) {
    const Instance inst = nonexistence_instance();
    EXPECT_TRUE(is_agreement(inst, ContractSet{}).holds);
    const auto v = is_agreement(inst, ContractSet{kA, kB});
    EXPECT_FALSE(v.holds);
    EXPECT_EQ(v.rejected_by_2, ContractSet{kA});
    EXPECT_EQ(v.rejected_by_1, ContractSet{});
}

TEST(Agreement, SubsetsOfAgreementsOnCoherentInstances) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Instance inst = gen::random_coherent_instance(seed, {1, 7, 3});
        for_each_subset(inst.universe, [&](ContractSet a) {
            if (!is_agreement(inst, a).holds) return;
            for_each_subset(a, [&](ContractSet b) { EXPECT_TRUE(is_agreement(inst, b).holds); });
        });
    }
}

TEST(Stability, Examples) {
    const Instance inst = nonexistence_instance();
    EXPECT_TRUE(is_stable_set(inst, inst.full()).holds);
    EXPECT_TRUE(is_stable_set(inst, inst.full(), StabilityMode::full).holds);
    const auto empty = is_stable_set(inst, ContractSet{});
    EXPECT_FALSE(empty.holds);
    EXPECT_EQ(empty.blocking_contract, kA);
    const auto just_a = is_stable_set(inst, ContractSet{kA});
    EXPECT_FALSE(just_a.holds);
    EXPECT_EQ(just_a.blocking_contract, kB);
    const auto full = is_stable_set(inst, ContractSet{}, StabilityMode::full);
    EXPECT_FALSE(full.holds);
    ASSERT_TRUE(full.blocking_set);
    EXPECT_EQ(*full.blocking_set, ContractSet{kA});
}

TEST(Stability, FullModeSizeBound) {
    const Instance inst = identity_instance(21);
    EXPECT_THROW(is_stable_set(inst, ContractSet{}, StabilityMode::full), size_error);
    EXPECT_TRUE(is_stable_set(inst, ContractSet{0}, StabilityMode::full).holds == false);
}

TEST(Stability, ModesAgreeAndSupersetsStayStable) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Instance inst = gen::random_coherent_instance(seed, {1, 7, 3});
        std::vector<char> stable(std::size_t{1} << inst.universe);
        for_each_subset(inst.universe, [&](ContractSet a) {
            const bool single = is_stable_set(inst, a).holds;
            EXPECT_EQ(single, is_stable_set(inst, a, StabilityMode::full).holds) << "seed " << seed;
            stable[a.mask()] = single ? 1 : 0;
        });
        for_each_subset(inst.universe, [&](ContractSet a) {
            if (!stable[a.mask()]) return;
            for_each_subset(inst.full() - a, [&](ContractSet extra) { EXPECT_TRUE(stable[(a | extra).mask()]); });
        });
    }
}

// --- run invariants on coherent instances -----------------------------------------

class RunInvariants : public ::testing::TestWithParam<int> {};

TEST_P(RunInvariants, TraceAndOptimality) {
    const auto seed = static_cast<std::uint64_t>(GetParam());
    const Instance inst = gen::random_coherent_instance(seed, {1, 9, 3});
    const auto cat = enumerate_stable_agreements(inst);
    for (int proposer = 1; proposer <= 2; ++proposer) {
        const auto r = run(inst, proposer);
        const ChoiceSpec& fp = inst.side(proposer);
        const ChoiceSpec& fq = inst.side(3 - proposer);
        const auto& steps = r.trace.steps;
        EXPECT_LE(r.trace.iterations(), inst.universe + 1);
        for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
            const ContractSet z = steps[j].pool;
            const ContractSet z_next = steps[j + 1].pool;
            EXPECT_TRUE(z_next.subset_of(z));
            EXPECT_NE(z_next, z);
            // accepted offers are offered again
            EXPECT_TRUE(steps[j].accepted.subset_of(fp(z_next)));
            // offers only improve for the other side
            EXPECT_TRUE(leq(fq, steps[j].offers, steps[j + 1].offers));
            // rejected contracts stay unwanted next to the outcome
            for (ContractId x : z - z_next) EXPECT_FALSE(fq(r.outcome.with(x)).contains(x));
        }
        EXPECT_TRUE(r.verdict.holds());
        EXPECT_TRUE(is_stable_set(inst, r.outcome, StabilityMode::full).holds);
        ASSERT_TRUE(cat.index_of(r.outcome)) << "seed " << seed;
        for (const ContractSet& a : cat.agreements) {
            EXPECT_TRUE(leq(fp, a, r.outcome));
            EXPECT_TRUE(leq(fq, r.outcome, a));
            EXPECT_TRUE(a.subset_of(r.trace.final_pool()));
        }
    }
    // ≤_1 is antisymmetric on stable agreements and inverse to ≤_2
    for (const ContractSet& a : cat.agreements) {
        for (const ContractSet& b : cat.agreements) {
            if (leq(inst.f1, a, b) && leq(inst.f1, b, a)) {
                EXPECT_EQ(a, b);
            }
            EXPECT_EQ(leq(inst.f1, a, b), leq(inst.f2, b, a));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RunInvariants, ::testing::Range(1, 61));

// --- meet / join ------------------------------------------------------------------

TEST(Lattice, MeetJoinIdempotentAndBounds) {
    const Instance inst = build_marriage_instance({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {{1, 2, 0}, {2, 0, 1}, {0, 1, 2}});
    const auto cat = enumerate_stable_agreements(inst);
    ASSERT_EQ(cat.size(), 3u);
    const ContractSet top = run(inst, 1).outcome;
    const ContractSet bottom = run(inst, 2).outcome;
    for (const ContractSet& a : cat.agreements) {
        EXPECT_EQ(meet(inst, a, a), a);
        EXPECT_EQ(join(inst, a, a), a);
        EXPECT_EQ(meet(inst, top, a), a);
        EXPECT_EQ(join(inst, a, top), top);
        EXPECT_EQ(meet(inst, bottom, a), bottom);
        EXPECT_EQ(join(inst, bottom, a), a);
    }
    const auto detail = meet_detail(inst, top, bottom);
    EXPECT_EQ(detail.trace.steps.front().pool, closure(inst.f1, top) & closure(inst.f1, bottom));
}

TEST(Lattice, MatchesOracleOnRandomInstances) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const Instance inst = gen::random_coherent_instance(seed, {1, 9, 3});
        const auto cat = enumerate_stable_agreements(inst);
        for (const ContractSet& b : cat.agreements) {
            for (const ContractSet& c : cat.agreements) {
                EXPECT_EQ(std::optional<ContractSet>(meet(inst, b, c)), brute_glb(cat, b, c)) << "seed " << seed;
                EXPECT_EQ(std::optional<ContractSet>(join(inst, b, c)), brute_lub(cat, b, c)) << "seed " << seed;
            }
        }
    }
}

TEST(Lattice, RejectsNonStableInputs) {
    const Instance inst = build_marriage_instance({{0, 1}, {1, 0}}, {{0, 1}, {1, 0}});
    const ContractSet s = run(inst).outcome;
    EXPECT_THROW(meet(inst, s, ContractSet{}), precondition_error);
    EXPECT_THROW(join(inst, ContractSet{0, 1}, s), precondition_error);
}
