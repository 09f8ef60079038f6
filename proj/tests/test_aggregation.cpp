#include <gtest/gtest.h>

#include "support.hpp"

using namespace cmatch;
using namespace cmatch::testing;

namespace {

const AgentId kI0{Side::I, 0};
const AgentId kI1{Side::I, 1};

} // namespace

TEST(Aggregate, SingleAgentIsThatAgent) {
    std::mt19937_64 rng(3);
    const auto part = random_coherent(rng, 4);
    const std::vector<AgentId> owners(4, kI0);
    const auto g = aggregate_side({{kI0, part}}, owners);
    EXPECT_EQ(g.kind(), std::string("aggregate"));
    EXPECT_EQ(tabulate(g), tabulate(part));
}

TEST(Aggregate, TwoMenUnionOfTops) {
    // m1 owns 0, 1 (prefers 1), m2 owns 2, 3 (prefers 2)
    const std::vector<AgentId> owners{kI0, kI0, kI1, kI1};
    const auto g = aggregate_side({{kI0, top_of_order(2, {1, 0})}, {kI1, top_of_order(2, {0, 1})}}, owners);
    EXPECT_EQ(g(ContractSet::full(4)), (ContractSet{1, 2}));
    EXPECT_EQ(g(ContractSet{0, 3}), (ContractSet{0, 3}));
    EXPECT_EQ(g(ContractSet{}), ContractSet{});
}

TEST(Aggregate, Errors) {
    const std::vector<AgentId> owners{kI0, kI1};
    // I1 owns contract 1 but has no function
    EXPECT_THROW(aggregate_side({{kI0, identity_choice(1)}}, owners), spec_error);
    // spec over the wrong slice size
    EXPECT_THROW(aggregate_side({{kI0, identity_choice(2)}, {kI1, identity_choice(1)}}, owners), spec_error);
    const auto g = aggregate_side({{kI0, identity_choice(1)}, {kI1, identity_choice(1)}}, owners);
    EXPECT_THROW(g(ContractSet{2}), domain_error);
}

TEST(Aggregate, LabelLocality) {
    // changing contracts outside X_a never changes a's contribution
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const Instance inst = gen::random_coherent_instance(100 + static_cast<std::uint64_t>(trial));
        const auto* agg = inst.f1.as<AggregateChoice>();
        ASSERT_NE(agg, nullptr);
        const int n = inst.universe;
        for_each_subset(n, [&](ContractSet a) {
            for (const auto& part : agg->parts) {
                const ContractSet mine = inst.f1(a) & part.slice;
                const ContractSet noise = ContractSet::from_mask(rng()) & (ContractSet::full(n) - part.slice);
                const ContractSet other = (a & part.slice) | noise;
                EXPECT_EQ(inst.f1(other) & part.slice, mine);
                EXPECT_EQ(mine, expand(part.spec(compress(a, part.slice)), part.slice));
            }
        });
    }
}

TEST(Aggregate, PreservesEachAxiomSeparately) {
    // parts drawn from tables satisfying a chosen subset of the axioms
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 60; ++trial) {
        const auto p0 = random_table(rng, 3, true);
        const auto p1 = random_table(rng, 2, true);
        const Tabulated t0(p0), t1(p1);
        const bool irc = check_irc(t0).empty() && check_irc(t1).empty();
        const bool subs = check_substitutes(t0).empty() && check_substitutes(t1).empty();
        if (!irc && !subs) continue;
        ++checked;
        const std::vector<AgentId> owners{kI0, kI1, kI0, kI1, kI0};
        const Tabulated g(aggregate_side({{kI0, p0}, {kI1, p1}}, owners));
        EXPECT_TRUE(check_contraction(g).empty());
        if (irc) {
            EXPECT_TRUE(check_irc(g).empty());
        }
        if (subs) {
            EXPECT_TRUE(check_substitutes(g).empty());
        }
    }
    EXPECT_GT(checked, 10);
}

TEST(Aggregate, CoherentPartsGiveCoherentSides) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const Instance inst = gen::random_coherent_instance(seed);
        EXPECT_TRUE(check_coherent(inst.f1).coherent()) << "seed " << seed;
        EXPECT_TRUE(check_coherent(inst.f2).coherent()) << "seed " << seed;
    }
}

TEST(Aggregate, CouplesAgentIsFlagged) {
    // wants both contracts or nothing
    const auto couple = table_from(2, [](ContractSet a) { return a == ContractSet::full(2) ? a : ContractSet{}; });
    const auto g = aggregate_side({{kI0, couple}, {kI1, identity_choice(1)}}, {kI0, kI0, kI1});
    EXPECT_FALSE(check_coherent(g).coherent());
}

// --- marriage ----------------------------------------------------------------

TEST(Marriage, OneByOne) {
    const Instance inst = build_marriage_instance({{0}}, {{0}});
    EXPECT_EQ(inst.universe, 1);
    EXPECT_EQ(inst.names, std::vector<std::string>{"m1:w1"});
    EXPECT_EQ(inst.f1(ContractSet{0}), ContractSet{0});
    EXPECT_EQ(inst.f2(ContractSet{0}), ContractSet{0});
}

TEST(Marriage, TwoByTwoMutuallyFirst) {
    const Instance inst = build_marriage_instance({{0, 1}, {1, 0}}, {{0, 1}, {1, 0}});
    EXPECT_TRUE(check_coherent(inst.f1).coherent());
    EXPECT_TRUE(check_coherent(inst.f2).coherent());
    const auto cat = enumerate_stable_agreements(inst);
    ASSERT_EQ(cat.size(), 1u);
    EXPECT_EQ(cat.agreements[0], (ContractSet{marriage_contract(0, 0, 2), marriage_contract(1, 1, 2)}));
}

TEST(Marriage, ThreeByThreeCoherent) {
    const Instance inst = build_marriage_instance({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {{1, 2, 0}, {2, 0, 1}, {0, 1, 2}});
    EXPECT_TRUE(check_coherent(inst.f1).coherent());
    EXPECT_TRUE(check_coherent(inst.f2).coherent());
}

TEST(Marriage, IncompleteListsRejected) {
    EXPECT_THROW(build_marriage_instance({{0}}, {{0}, {0}}), spec_error);
    EXPECT_THROW(build_marriage_instance({{0, 0}}, {{0}, {0}}), spec_error);
    EXPECT_THROW(build_marriage_instance({{0, 2}}, {{0}, {0}}), spec_error);
}

TEST(Marriage, AgreementsArePartialMatchings) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto p = gen::random_marriage(seed, 3);
        const Instance inst = build_marriage_instance(p.men, p.women);
        for_each_subset(inst.universe, [&](ContractSet a) {
            if (!is_agreement(inst, a).holds) return;
            std::vector<int> man_deg(p.men.size()), woman_deg(p.women.size());
            for (ContractId x : a) {
                ++man_deg[static_cast<std::size_t>((*inst.labels)[static_cast<std::size_t>(x)].producer.index)];
                ++woman_deg[static_cast<std::size_t>((*inst.labels)[static_cast<std::size_t>(x)].consumer.index)];
            }
            for (int d : man_deg) EXPECT_LE(d, 1);
            for (int d : woman_deg) EXPECT_LE(d, 1);
        });
    }
}
