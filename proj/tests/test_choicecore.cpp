#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace cmatch;
using namespace cmatch::testing;

// --- ContractSet -----------------------------------------------------------

TEST(ContractSet, BasicAlgebra) {
    const ContractSet a{0, 2, 5};
    const ContractSet b{2, 3};
    EXPECT_EQ(a.size(), 3);
    EXPECT_TRUE(a.contains(5));
    EXPECT_FALSE(a.contains(1));
    EXPECT_EQ(a | b, (ContractSet{0, 2, 3, 5}));
    EXPECT_EQ(a & b, ContractSet{2});
    EXPECT_EQ(a - b, (ContractSet{0, 5}));
    EXPECT_TRUE(ContractSet{2}.subset_of(a));
    EXPECT_TRUE(ContractSet{}.subset_of(a));
    EXPECT_TRUE((ContractSet{1, 4}).disjoint(a));
    EXPECT_EQ(a.with(1).without(0), (ContractSet{1, 2, 5}));
    EXPECT_EQ(a.first(), 0);
    EXPECT_EQ(a.to_string(), "{0,2,5}");
    EXPECT_EQ(ContractSet{}.to_string(), "{}");
    EXPECT_EQ(ContractSet::full(3), (ContractSet{0, 1, 2}));
    EXPECT_TRUE(a.within(6));
    EXPECT_FALSE(a.within(5));
    EXPECT_EQ(ContractSet::full(64).size(), 64);
}

TEST(ContractSet, IterationIsIncreasing) {
    const ContractSet a{7, 1, 63, 4};
    std::vector<ContractId> seen(a.begin(), a.end());
    EXPECT_EQ(seen, (std::vector<ContractId>{1, 4, 7, 63}));
    EXPECT_EQ(a.ids(), seen);
}

TEST(ContractSet, OutOfRangeIdsThrow) {
    ContractSet s;
    EXPECT_THROW(s.insert(64), domain_error);
    EXPECT_THROW(s.insert(-1), domain_error);
    EXPECT_THROW(ContractSet::full(65), domain_error);
}

TEST(ContractSet, SubsetWalkVisitsEverySubsetOnce) {
    const ContractSet base{1, 3, 4};
    std::vector<ContractSet> seen;
    for_each_subset(base, [&](ContractSet s) { seen.push_back(s); });
    ASSERT_EQ(seen.size(), 8u);
    for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_LT(seen[i - 1].mask(), seen[i].mask());
    for (const auto& s : seen) EXPECT_TRUE(s.subset_of(base));

    int count = 0;
    for_each_subset(4, [&](ContractSet) { ++count; });
    EXPECT_EQ(count, 16);
    EXPECT_THROW(for_each_subset(31, [](ContractSet) {}), size_error);
}

TEST(ContractSet, CompressExpandRoundTrip) {
    const ContractSet slice{2, 5, 9};
    EXPECT_EQ(compress(ContractSet{5, 9}, slice), (ContractSet{1, 2}));
    EXPECT_EQ(expand(ContractSet{0, 2}, slice), (ContractSet{2, 9}));
    for_each_subset(slice, [&](ContractSet s) { EXPECT_EQ(expand(compress(s, slice), slice), s); });
}

// --- choose ----------------------------------------------------------------

TEST(Choose, IdentityReturnsItsArgument) {
    const auto f = identity_choice(2);
    EXPECT_EQ(choose(f, ContractSet{0, 1}), (ContractSet{0, 1}));
    EXPECT_EQ(f.kind(), std::string("identity"));
}

TEST(Choose, NonexistenceSecondSideTable) {
    EXPECT_EQ(choose(nonexistence_f2(), ContractSet{kA, kB}), ContractSet{kB});
}

TEST(Choose, TopOfOrderPicksSingleBest) {
    // X_m = {(m,w1), (m,w2)} as ids 0, 1; w2 preferred
    const auto f = top_of_order(2, {1, 0});
    EXPECT_EQ(f(ContractSet{0, 1}), ContractSet{1});
    EXPECT_EQ(f(ContractSet{0}), ContractSet{0});
    EXPECT_EQ(f(ContractSet{}), ContractSet{});
}

TEST(Choose, ResponsiveQuotaKeepsBestQ) {
    const auto f = responsive_quota(4, {3, 1, 0, 2}, 2);
    EXPECT_EQ(f(ContractSet::full(4)), (ContractSet{1, 3}));
    EXPECT_EQ(f(ContractSet{0, 2}), (ContractSet{0, 2}));
    EXPECT_EQ(f(ContractSet{2}), ContractSet{2});
    EXPECT_EQ(responsive_quota(3, {0, 1, 2}, 0)(ContractSet::full(3)), ContractSet{});
}

TEST(Choose, TableReturnsStoredRowVerbatim) {
    // deliberately non-contractive
    const auto f = table_choice(2, {ContractSet{}, ContractSet{1}, ContractSet{1}, ContractSet{0, 1}});
    EXPECT_EQ(f(ContractSet{0}), ContractSet{1});
}

TEST(Choose, Errors) {
    EXPECT_THROW(identity_choice(2)(ContractSet{2}), domain_error);
    // order declared on {0,1} only
    EXPECT_THROW(top_of_order(3, {0, 1})(ContractSet{2}), domain_error);
    EXPECT_THROW(table_choice(2, {ContractSet{}, ContractSet{}}), spec_error);
    EXPECT_THROW(table_choice(1, {ContractSet{}, ContractSet{3}}), spec_error);
    EXPECT_THROW(top_of_order(2, {0, 0}), spec_error);
    EXPECT_THROW(top_of_order(2, {0, 2}), spec_error);
    EXPECT_THROW(responsive_quota(2, {0, 1}, -1), spec_error);
}

// --- union of orders ---------------------------------------------------------

TEST(UnionOfOrders, Examples) {
    // a, b, c = 0, 1, 2
    EXPECT_EQ(union_of_orders_choice(3, {{0, 1, 2}})(ContractSet{1, 2}), ContractSet{1});
    EXPECT_EQ(union_of_orders_choice(3, {{0, 1, 2}, {2, 1, 0}})(ContractSet{0, 1, 2}), (ContractSet{0, 2}));
    EXPECT_EQ(union_of_orders_choice(2, {{0, 1}, {0, 1}})(ContractSet{0, 1}), ContractSet{0});
    EXPECT_EQ(union_of_orders_choice(2, {{0, 1}})(ContractSet{}), ContractSet{});
}

TEST(UnionOfOrders, RejectsPartialOrders) {
    EXPECT_THROW(union_of_orders_choice(3, {{0, 1}}), spec_error);
    EXPECT_THROW(union_of_orders_choice(3, {}), spec_error);
}

// --- individual checkers -----------------------------------------------------

TEST(Contraction, Examples) {
    EXPECT_TRUE(check_contraction(identity_choice(3)).empty());
    // f({a}) = {b}
    const auto bad = table_choice(2, {ContractSet{}, ContractSet{1}, ContractSet{1}, ContractSet{0, 1}});
    const auto v = check_contraction(bad);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].a, ContractSet{0});
    EXPECT_TRUE(replay(bad, v[0]));
    EXPECT_TRUE(check_contraction(nonexistence_f1()).empty());
}

TEST(Irc, Examples) {
    EXPECT_TRUE(check_irc(identity_choice(3)).empty());
    EXPECT_TRUE(check_irc(nonexistence_f2()).empty());
    // f({a,b})={a}, f({b})={b}, f({a})={a}
    const auto t1 = table_choice(2, {ContractSet{}, ContractSet{0}, ContractSet{1}, ContractSet{0}});
    EXPECT_TRUE(check_irc(t1).empty());
    // same with f({a}) = ∅: removing the rejected b gives ∅ ⊆ {a}
    const auto t2 = table_choice(2, {ContractSet{}, ContractSet{}, ContractSet{1}, ContractSet{0}});
    EXPECT_TRUE(check_irc(t2).empty());
}

TEST(Irc, ViolationReplays) {
    // 2 is rejected from {0,1,2}, yet dropping it changes the choice to {1}
    const auto f = table_from(3, [](ContractSet a) {
        if (a == ContractSet{0, 1, 2}) return ContractSet{0};
        if (a == ContractSet{0, 1}) return ContractSet{1};
        return a;
    });
    const auto v = check_irc(f);
    ASSERT_FALSE(v.empty());
    for (const auto& r : v) EXPECT_TRUE(replay(f, r)) << r.render();
}

TEST(Substitutes, NonexistenceFirstSideWitness) {
    const auto v = check_substitutes(nonexistence_f1());
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].x, kB);
    EXPECT_EQ(v[0].b, ContractSet{kB});
    EXPECT_EQ(v[0].a, (ContractSet{kA, kB}));
    EXPECT_TRUE(replay(nonexistence_f1(), v[0]));
}

TEST(Substitutes, Examples) {
    EXPECT_TRUE(check_substitutes(identity_choice(4)).empty());
    EXPECT_TRUE(check_substitutes(union_of_orders_choice(4, {{2, 0, 3, 1}})).empty());
}

TEST(PathIndependence, Examples) {
    EXPECT_TRUE(check_path_independence(identity_choice(3)).empty());
    EXPECT_TRUE(check_path_independence(nonexistence_f2()).empty());
    EXPECT_FALSE(check_path_independence(nonexistence_f1()).empty());
    for (const auto& r : check_path_independence(nonexistence_f1())) EXPECT_TRUE(replay(nonexistence_f1(), r));
}

TEST(Coherent, Examples) {
    EXPECT_TRUE(check_coherent(identity_choice(4)).coherent());
    const auto r = check_coherent(nonexistence_f1());
    EXPECT_FALSE(r.coherent());
    EXPECT_TRUE(r.contraction.empty());
    EXPECT_FALSE(r.substitutes.empty());
    EXPECT_FALSE(r.checker_disagreement);
    ASSERT_TRUE(r.first_violation());
    EXPECT_EQ(r.first_violation()->axiom, Axiom::substitutes);
    EXPECT_TRUE(check_coherent(nonexistence_f2()).coherent());
    EXPECT_TRUE(check_coherent(valuation_choice(gen::additive_valuation({3, 1, 4}))).coherent());
}

TEST(Coherent, SizeBoundsRefuse) {
    CheckLimits limits;
    EXPECT_THROW(check_coherent(identity_choice(11), limits), size_error);
    EXPECT_THROW(check_substitutes(identity_choice(11), limits), size_error);
    EXPECT_THROW(check_irc(identity_choice(13), limits), size_error);
    EXPECT_NO_THROW(check_irc(identity_choice(12), limits));
    limits.pairwise_bound = 11;
    EXPECT_NO_THROW(check_path_independence(identity_choice(11), limits));
}

TEST(Coherent, ReportCapRespected) {
    CheckLimits limits;
    limits.max_reports = 3;
    std::mt19937_64 rng(5);
    const auto f = random_table(rng, 5, false);
    EXPECT_LE(check_contraction(f, limits).size(), 3u);
    EXPECT_LE(check_substitutes(f, limits).size(), 3u);
}

// --- properties on random functions ------------------------------------------

TEST(Properties, IrcIffLocalMonotonicity) {
    std::mt19937_64 rng(11);
    int violators = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + trial % 5;
        const auto f = random_table(rng, n, true);
        const Tabulated t(f);
        const bool irc = check_irc(t).empty();
        const bool lm = check_local_monotonicity(t).empty();
        EXPECT_EQ(irc, lm) << "trial " << trial;
        violators += irc ? 0 : 1;
        for (const auto& r : check_local_monotonicity(t, 4)) EXPECT_TRUE(replay(f, r));
    }
    EXPECT_GT(violators, 0);
}

TEST(Properties, SubstitutesFormsAgree) {
    std::mt19937_64 rng(12);
    int violators = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + trial % 5;
        // mix coherent and arbitrary contractive functions
        const auto f = trial % 3 == 0 ? random_coherent(rng, n) : random_table(rng, n, true);
        const Tabulated t(f);
        const bool original = check_substitutes(t, SubstitutesForm::original).empty();
        EXPECT_EQ(original, check_substitutes(t, SubstitutesForm::intersection).empty());
        EXPECT_EQ(original, check_substitutes(t, SubstitutesForm::extension).empty());
        EXPECT_EQ(original, check_substitutes(t, SubstitutesForm::rejection).empty());
        violators += original ? 0 : 1;
        for (auto form : {SubstitutesForm::original, SubstitutesForm::intersection, SubstitutesForm::extension,
                          SubstitutesForm::rejection})
            for (const auto& r : check_substitutes(t, form, 4)) EXPECT_TRUE(replay(f, r));
    }
    EXPECT_GT(violators, 0);
}

TEST(Properties, PathIndependenceWithContractionIffCoherent) {
    std::mt19937_64 rng(13);
    int coherent = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + trial % 4;
        const auto f = trial % 2 == 0 ? random_coherent(rng, n) : random_table(rng, n, trial % 4 != 1);
        const Tabulated t(f);
        const auto r = check_coherent(t);
        EXPECT_FALSE(r.checker_disagreement);
        const bool both = check_path_independence(t, PathIndependenceForm::both_sides).empty();
        EXPECT_EQ(r.contraction.empty() && r.path_independence.empty(), r.coherent());
        EXPECT_EQ(r.contraction.empty() && both, r.coherent());
        coherent += r.coherent() ? 1 : 0;
    }
    EXPECT_GT(coherent, 0);
}

TEST(Properties, CoherentConsequences) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 7;
        const Tabulated f(random_coherent(rng, n));
        ASSERT_TRUE(check_coherent(f).coherent());
        for_each_subset(n, [&](ContractSet a) {
            EXPECT_EQ(f(f(a)), f(a));
            for_each_subset(n, [&](ContractSet b) {
                EXPECT_TRUE(f(a | b).subset_of(f(a) | f(b)));
                // cumulativity
                if (f(a).subset_of(b) && b.subset_of(a)) {
                    EXPECT_EQ(f(b), f(a));
                }
                // fixpoints are hereditary
                if (f(a) == a && b.subset_of(a)) {
                    EXPECT_EQ(f(b), b);
                }
            });
        });
    }
}

TEST(Properties, BuiltInVariantsAreCoherent) {
    std::mt19937_64 rng(15);
    for (int n = 0; n <= 8; ++n) {
        EXPECT_TRUE(check_coherent(identity_choice(n)).coherent());
        for (int trial = 0; trial < 5; ++trial) {
            const auto order = gen::random_order(rng, n);
            EXPECT_TRUE(check_coherent(top_of_order(n, order)).coherent());
            EXPECT_TRUE(check_coherent(responsive_quota(n, order, trial % (n + 1))).coherent());
            EXPECT_TRUE(check_coherent(random_coherent(rng, n)).coherent());
        }
    }
}

// --- valuations ----------------------------------------------------------------

TEST(Valuation, Examples) {
    const auto additive = valuation_choice(gen::additive_valuation({2, 7}));
    EXPECT_EQ(additive(ContractSet{0, 1}), (ContractSet{0, 1}));

    const auto unit = valuation_choice(gen::unit_demand_valuation({3, 5}));
    EXPECT_EQ(unit(ContractSet{0, 1}), ContractSet{1});

    // v(∅)=0, v({0})=v({1})=v({0,1})=1: ties go to the lower id
    const std::vector<Rational> tie{0, 1, 1, 1};
    EXPECT_EQ(valuation_choice(tie)(ContractSet{0, 1}), ContractSet{0});
    EXPECT_EQ(valuation_choice(tie, dyadic_scheme(2, Rational(1, 4)))(ContractSet{0, 1}), ContractSet{0});
}

TEST(Valuation, DyadicPricesIncreaseWithId) {
    const auto s = dyadic_scheme(4, Rational(1));
    ASSERT_EQ(s.prices.size(), 4u);
    for (std::size_t x = 1; x < 4; ++x) EXPECT_LT(s.prices[x - 1], s.prices[x]);
    for (const auto& p : s.prices) EXPECT_LE(p, s.epsilon);
}

TEST(Valuation, SchemeValidation) {
    const auto v = gen::additive_valuation({1, 2});  // smallest gap m = 1, n = 2
    EXPECT_THROW(valuation_choice(v, dyadic_scheme(2, Rational(1, 2))), spec_error);  // eps = m/n
    EXPECT_NO_THROW(valuation_choice(v, dyadic_scheme(2, Rational(1, 3))));
    PerturbationScheme bad = dyadic_scheme(2, Rational(1, 4));
    bad.prices[0] = Rational(1, 2);
    EXPECT_THROW(valuation_choice(v, bad), spec_error);
    PerturbationScheme zero{Rational(1, 4), {0, 0}};
    // zero prices leave ties unbroken: {0} and {1} tie under unit demand with equal items
    EXPECT_THROW(valuation_choice(gen::unit_demand_valuation({2, 2}), zero), spec_error);
    EXPECT_THROW(valuation_choice(std::vector<Rational>{0, 1, 2}), spec_error);
}

TEST(Valuation, AttainsUnperturbedMaximum) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 6;
        const auto v = trial % 2 ? gen::unit_demand_valuation(gen::random_values(rng, n, 0, 6))
                                 : gen::additive_valuation(gen::random_values(rng, n, -3, 6));
        const auto f = valuation_choice(v);
        for_each_subset(n, [&](ContractSet a) {
            Rational best = v[0];
            for_each_subset(a, [&](ContractSet b) { best = std::max(best, v[b.mask()]); });
            const ContractSet chosen = f(a);
            EXPECT_TRUE(chosen.subset_of(a));
            EXPECT_EQ(v[chosen.mask()], best);
        });
    }
}

TEST(Valuation, InvariantUnderAddingAConstant) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 5;
        auto v = gen::assignment_valuation({{1, 4}, {3, 2}, {2, 2}, {5, 1}, {0, 3}});
        v.resize(std::size_t{1} << n);
        if (trial % 2) v = gen::unit_demand_valuation(gen::random_values(rng, n, 0, 9));
        auto shifted = v;
        const Rational c(static_cast<std::int64_t>(trial) - 7, 3);
        for (auto& x : shifted) x += c;
        const auto f = valuation_choice(v);
        const auto g = valuation_choice(shifted);
        EXPECT_EQ(tabulate(f), tabulate(g));
    }
}

// Sampled price-vector falsifier for the valuation substitutes property: for
// random prices p <= q with p_x = q_x, if x is demanded at p it must stay
// demanded at q. Heuristic; it can find counterexamples but proves nothing.
namespace {

ContractSet demand(const std::vector<Rational>& v, const std::vector<Rational>& price) {
    const int n = static_cast<int>(price.size());
    ContractSet best;
    Rational best_u = v[0];
    for_each_subset(n, [&](ContractSet b) {
        Rational u = v[b.mask()];
        for (ContractId x : b) u -= price[static_cast<std::size_t>(x)];
        if (u > best_u) {
            best_u = u;
            best = b;
        }
    });
    return best;
}

bool falsify_substitutes(const std::vector<Rational>& v, int n, std::mt19937_64& rng, int samples) {
    std::uniform_int_distribution<int> cents(0, 40);
    for (int s = 0; s < samples; ++s) {
        std::vector<Rational> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
        // odd denominators keep sampled prices away from exact ties
        for (int x = 0; x < n; ++x) {
            p[static_cast<std::size_t>(x)] = Rational(cents(rng) * 2 + 1, 7);
            q[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(x)] + Rational(cents(rng), 5);
        }
        for (int x = 0; x < n; ++x) {
            auto q2 = q;
            q2[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(x)];
            if (demand(v, p).contains(x) && !demand(v, q2).contains(x)) return true;
        }
    }
    return false;
}

} // namespace

TEST(Valuation, SampledSubstitutesFalsifier) {
    std::mt19937_64 rng(23);
    EXPECT_FALSE(falsify_substitutes(gen::unit_demand_valuation({3, 5, 4}), 3, rng, 400));
    EXPECT_FALSE(falsify_substitutes(gen::additive_valuation({3, 5, 4}), 3, rng, 400));
    // complements: only the pair is worth anything
    const std::vector<Rational> complements{0, 0, 0, 10};
    EXPECT_TRUE(falsify_substitutes(complements, 2, rng, 400));
    EXPECT_FALSE(check_coherent(valuation_choice(complements)).coherent());
}
