#include <gtest/gtest.h>

#include <numeric>

#include "crdu/choquet.hpp"
#include "crdu/sampling.hpp"
#include "oracles.hpp"

namespace crdu {
namespace {

SpacePtr abc() { return StateSpace::make({"a", "b", "c"}); }

Capacity sample_capacity() {
    // a .2, b .3, c .1, ab .6, ac .4, bc .5
    return Capacity(abc(), {0.0, 0.2, 0.3, 0.6, 0.1, 0.4, 0.5, 1.0});
}

TEST(ChoquetTest, SortedSum) {
    Act x(abc(), {3, 1, 2});
    EXPECT_NEAR(choquet(x, sample_capacity()), 1.6, 1e-12);
    EXPECT_NEAR(oracle::choquet_moebius(x, sample_capacity()), 1.6, 1e-12);
}

TEST(ChoquetTest, Decomposition) {
    auto terms = choquet_decomposition(Act(abc(), {3, 1, 2}), sample_capacity());
    ASSERT_EQ(terms.size(), 3u);
    EXPECT_EQ(terms[0].level_set, Mask{0b001});
    EXPECT_EQ(terms[1].level_set, Mask{0b101});
    EXPECT_NEAR(terms[1].weight, 0.2, 1e-12);
    EXPECT_NEAR(terms[2].weight, 0.6, 1e-12);
}

TEST(ChoquetTest, ConstantAndAdditive) {
    EXPECT_NEAR(choquet(Act::constant(abc(), -2.5), sample_capacity()), -2.5, 1e-12);
    ProbabilityMeasure mu(abc(), {0.2, 0.3, 0.5});
    Act x(abc(), {4, -1, 2});
    EXPECT_NEAR(choquet(x, Capacity::from_measure(mu)), mu.expectation(x), 1e-12);
}

TEST(ChoquetTest, RiemannOracle) {
    EXPECT_NEAR(choquet_riemann_oracle(Act(abc(), {3, 1, 2}), sample_capacity(), 1000000), 1.6, 1e-5);
    auto s2 = StateSpace::indexed(2);
    auto u = Capacity::from_measure(ProbabilityMeasure::uniform(s2));
    EXPECT_NEAR(choquet_riemann_oracle(Act(s2, {-1, 1}), u, 1000000), 0.0, 1e-5);
    Act neg(abc(), {-3, -0.5, -2});
    EXPECT_NEAR(choquet_riemann_oracle(neg, sample_capacity(), 1000000), choquet(neg, sample_capacity()), 1e-5);
    EXPECT_THROW(choquet_riemann_oracle(neg, sample_capacity(), 100), DomainError);
}

TEST(ChoquetTest, ComonotoneAdditivity) {
    Act x(abc(), {3, 1, 2});
    EXPECT_TRUE(comonotone_additivity_check(x, x * 2.0, sample_capacity()));
    EXPECT_TRUE(comonotone_additivity_check(x, Act::constant(abc(), 7), sample_capacity()));
    Rng rng(41);
    auto s5 = StateSpace::indexed(5);
    auto pair = random_comonotone_acts(s5, rng, 2, -3, 3);
    EXPECT_TRUE(comonotone_additivity_check(pair[0], pair[1], random_capacity(s5, rng)));
    EXPECT_THROW(comonotone_additivity_check(x, Act(abc(), {1, 3, 2}), sample_capacity()), DomainError);
}

TEST(ChoquetProperty, AgreesWithMoebiusAndRiemann) {
    oracle::Gen gen(42);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + gen.index(6);
        auto s = StateSpace::indexed(n);
        Capacity nu(s, gen.monotone_table(n));
        Act x(s, gen.payoffs(n, -5, 5, gen.coin()));
        const double c = choquet(x, nu);
        EXPECT_NEAR(c, oracle::choquet_moebius(x, nu), 1e-9);
        if (t < 20) EXPECT_NEAR(c, choquet_riemann_oracle(x, nu, 1000000), 1e-5);
    }
}

TEST(ChoquetProperty, Monotone) {
    oracle::Gen gen(43);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + gen.index(6);
        auto s = StateSpace::indexed(n);
        Capacity nu(s, gen.monotone_table(n));
        Act y(s, gen.payoffs(n, -5, 5));
        std::vector<double> up(n);
        for (std::size_t i = 0; i < n; ++i) up[i] = y[i] + gen.real(0, 2);
        EXPECT_GE(choquet(Act(s, up), nu), choquet(y, nu) - 1e-12);
    }
}

TEST(ChoquetProperty, IndicatorsReturnCapacity) {
    oracle::Gen gen(44);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + gen.index(6);
        auto s = StateSpace::indexed(n);
        Capacity nu(s, gen.monotone_table(n));
        for (Mask a = 0; a <= s->full_mask(); ++a)
            EXPECT_NEAR(choquet(Act::indicator(Event(s, a)), nu), nu(a), 1e-12);
    }
}

TEST(ChoquetProperty, TieInvariance) {
    // Relabel states so tied payoffs swap their index order; the value must
    // not move.
    oracle::Gen gen(45);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + gen.index(5);
        auto s = StateSpace::indexed(n);
        auto table = gen.monotone_table(n);
        std::vector<double> pay = gen.payoffs(n, 0, 2, true);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen.rng);
        std::vector<double> table2(table.size());
        for (Mask m = 0; m < table.size(); ++m) {
            Mask image = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (oracle::bit(m, i)) image |= Mask{1} << perm[i];
            table2[image] = table[m];
        }
        std::vector<double> pay2(n);
        for (std::size_t i = 0; i < n; ++i) pay2[perm[i]] = pay[i];
        EXPECT_NEAR(choquet(Act(s, pay), Capacity(s, table)), choquet(Act(s, pay2), Capacity(s, table2)), 1e-12);
    }
}

TEST(ChoquetProperty, SuperadditiveUnderSupermodular) {
    Rng rng(46);
    for (int t = 0; t < 200; ++t) {
        auto s = StateSpace::indexed(2 + uniform_index(rng, 5));
        Capacity nu = random_supermodular_capacity(s, rng);
        Act x = random_act(s, rng, -3, 3), y = random_act(s, rng, -3, 3);
        EXPECT_GE(choquet(x + y, nu), choquet(x, nu) + choquet(y, nu) - 1e-12);
    }
}

TEST(ChoquetProperty, ComonotoneAdditive) {
    Rng rng(47);
    for (int t = 0; t < 200; ++t) {
        auto s = StateSpace::indexed(2 + uniform_index(rng, 5));
        auto acts = random_comonotone_acts(s, rng, 2, -3, 3);
        EXPECT_TRUE(comonotone_additivity_check(acts[0], acts[1], random_capacity(s, rng)));
    }
}

} // namespace
} // namespace crdu
