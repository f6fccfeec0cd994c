#include <gtest/gtest.h>

#include "crdu/core.hpp"
#include "crdu/sampling.hpp"
#include "oracles.hpp"

namespace crdu {
namespace {

Capacity peaked() {
    return Capacity::from_function(StateSpace::indexed(3), [](Mask m) {
        if (m == 0b111) return 1.0;
        return (m == 0b011 || m == 0b101) ? 0.8 : 0.0;
    });
}

Capacity two_state() { return Capacity(StateSpace::indexed(2), {0.0, 0.3, 0.4, 1.0}); }

std::vector<std::vector<double>> rows(const std::vector<ProbabilityMeasure>& v) {
    std::vector<std::vector<double>> out;
    for (const auto& m : v) out.emplace_back(m.weights().begin(), m.weights().end());
    return out;
}

TEST(CoreTest, Contains) {
    ProbabilityMeasure mu(StateSpace::indexed(3), {0.2, 0.3, 0.5});
    EXPECT_TRUE(core_contains(Capacity::from_measure(mu), mu));
    auto s2 = StateSpace::indexed(2);
    EXPECT_TRUE(core_contains(two_state(), ProbabilityMeasure(s2, {0.5, 0.5})));
    Check c = core_membership(two_state(), ProbabilityMeasure(s2, {0.2, 0.8}));
    EXPECT_FALSE(c.holds);
    EXPECT_EQ(c.witness, std::vector<Mask>{0b01});
}

TEST(CoreTest, Vertices) {
    EXPECT_LE(oracle::vertex_set_distance(rows(core_vertices(two_state())), {{0.3, 0.7}, {0.6, 0.4}}), 1e-12);
    ProbabilityMeasure mu(StateSpace::indexed(3), {0.2, 0.3, 0.5});
    EXPECT_LE(oracle::vertex_set_distance(rows(core_vertices(Capacity::from_measure(mu))), {{0.2, 0.3, 0.5}}), 1e-12);
    const std::vector<std::vector<double>> expected{{0.6, 0.2, 0.2}, {0.8, 0.2, 0}, {0.8, 0, 0.2}, {1, 0, 0}};
    EXPECT_LE(oracle::vertex_set_distance(rows(core_vertices(peaked())), expected), 1e-12);
}

TEST(CoreTest, VerticesTooLarge) {
    auto s = StateSpace::indexed(9);
    EXPECT_THROW(core_vertices(Capacity::from_measure(ProbabilityMeasure::uniform(s))), SpaceTooLarge);
}

TEST(CoreTest, MarginalVector) {
    auto v = marginal_vector(two_state(), {0, 1});
    EXPECT_NEAR(v.weight(0), 0.3, 1e-12);
    EXPECT_NEAR(v.weight(1), 0.7, 1e-12);
    ProbabilityMeasure mu(StateSpace::indexed(3), {0.2, 0.3, 0.5});
    EXPECT_EQ(marginal_vector(Capacity::from_measure(mu), {2, 0, 1}).weights().size(), 3u);
    auto w = marginal_vector(Capacity::from_measure(mu), {2, 0, 1});
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(w.weight(i), mu.weight(i), 1e-12);
}

TEST(CoreTest, BalancedAndExact) {
    EXPECT_TRUE(is_balanced(peaked()));
    Check ex = exactness(peaked());
    EXPECT_FALSE(ex.holds);
    EXPECT_FALSE(ex.witness.empty());
    auto add = Capacity::from_measure(ProbabilityMeasure(StateSpace::indexed(3), {0.2, 0.3, 0.5}));
    EXPECT_TRUE(is_balanced(add));
    EXPECT_TRUE(is_exact(add));
    // Empty core: not exact by convention.
    Capacity heavy(StateSpace::indexed(2), {0.0, 0.7, 0.7, 1.0});
    EXPECT_FALSE(is_balanced(heavy));
    EXPECT_FALSE(is_exact(heavy));
}

TEST(CoreTest, RobustValue) {
    auto id = UtilityFunction::identity();
    auto gi = DistortionFunction::identity();
    auto s2 = StateSpace::indexed(2);
    RobustValue r = robust_value(id, gi, two_state(), Act(s2, {1, 0}));
    EXPECT_NEAR(r.value, 0.3, 1e-12);
    EXPECT_TRUE(r.exact);

    Act x(StateSpace::indexed(3), {2, 1, 0});
    RobustValue gap = robust_value(id, gi, peaked(), x);
    EXPECT_NEAR(gap.value, 1.4, 1e-12);
    EXPECT_NEAR(choquet(x, peaked()), 0.8, 1e-12);

    ProbabilityMeasure mu(StateSpace::indexed(3), {0.2, 0.3, 0.5});
    auto g = DistortionFunction::power(2);
    Act y(mu.space(), {1, 4, 2});
    EXPECT_NEAR(robust_value(id, g, Capacity::from_measure(mu), y).value,
                choquet(y, compose(g, Capacity::from_measure(mu))), 1e-12);

    Capacity heavy(s2, {0.0, 0.7, 0.7, 1.0});
    EXPECT_THROW(robust_value(id, gi, heavy, Act(s2, {1, 0})), DomainError);
}

TEST(CoreTest, ChainAttainable) {
    EXPECT_FALSE(chain_attainable(peaked(), {0b001, 0b011}));
    EXPECT_TRUE(chain_attainable(peaked(), {0b000, 0b111}));
    EXPECT_TRUE(chain_attainable(two_state(), {0b01, 0b11}));
    EXPECT_THROW(chain_attainable(peaked(), {0b001, 0b110}), DomainError);
}

TEST(CoreProperty, VerticesMatchBruteForce) {
    oracle::Gen gen(51);
    std::size_t nonempty = 0;
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = 2 + gen.index(3);
        auto table = gen.monotone_table(n);
        // Shrink proper events so that many cores are nonempty.
        const double shrink = gen.real(0.2, 1.0);
        for (std::size_t m = 1; m + 1 < table.size(); ++m) table[m] *= shrink;
        Capacity nu(StateSpace::indexed(n), table);
        auto got = rows(core_vertices(nu));
        auto want = oracle::core_vertices_brute(nu);
        EXPECT_LE(oracle::vertex_set_distance(got, want), 1e-9) << nu.to_string();
        nonempty += !got.empty();
        for (const auto& v : core_vertices(nu)) EXPECT_TRUE(core_contains(nu, v));
    }
    EXPECT_GT(nonempty, 50u);
}

TEST(CoreProperty, MaxminForward) {
    Rng rng(52);
    for (int t = 0; t < 60; ++t) {
        auto s = StateSpace::indexed(2 + uniform_index(rng, 4));
        Capacity nu = random_supermodular_capacity(s, rng);
        auto u = random_utility(rng, -3, 3);
        auto g = random_distortion(rng);
        auto verts = core_vertices(nu);
        for (int k = 0; k < 5; ++k) {
            Act x = random_act(s, rng, -3, 3);
            Act ux = x.map([&](double v) { return u(v); });
            const double target = choquet(ux, compose(g, nu));
            RobustValue r = robust_value(u, g, nu, x);
            EXPECT_TRUE(r.exact);
            EXPECT_NEAR(r.value, target, 1e-7);
            // No core vertex beats the reported minimum.
            for (const auto& mu : verts)
                EXPECT_GE(choquet(ux, compose(g, Capacity::from_measure(mu))), r.value - 1e-9);
        }
    }
}

// For a balanced capacity that fails supermodularity at (S, T), the chain
// S n T within S u T cannot be matched by a core element, and the act
// c 1_A + 1_{B \ A} with u(c) = 2 separates the maxmin value from the
// Choquet value.
TEST(CoreProperty, MaxminConverse) {
    oracle::Gen gen(53);
    std::size_t cases = 0;
    for (int t = 0; t < 400 && cases < 60; ++t) {
        const std::size_t n = 3 + gen.index(2);
        auto table = gen.monotone_table(n);
        const double shrink = gen.real(0.3, 0.9);
        for (std::size_t m = 1; m + 1 < table.size(); ++m) table[m] *= shrink;
        Capacity nu(StateSpace::indexed(n), table);
        Check sm = supermodularity(nu);
        if (sm.holds || !is_balanced(nu)) continue;
        ++cases;
        const Mask s = sm.witness.at(0), tt = sm.witness.at(1);
        const Mask a = s & tt, b = s | tt;
        EXPECT_FALSE(chain_attainable(nu, {a, b}));
        auto u = UtilityFunction::identity();
        std::vector<double> pay(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (oracle::bit(a, i)) pay[i] = 2.0;
            else if (oracle::bit(b, i)) pay[i] = 1.0;
        }
        Act x(nu.space(), pay);
        const double c = choquet(x, nu);
        EXPECT_NEAR(c, nu(a) + nu(b), 1e-12);
        EXPECT_GT(robust_value(u, DistortionFunction::identity(), nu, x).value, c + 1e-12);
    }
    EXPECT_GE(cases, 20u);
}

TEST(CoreProperty, SupermodularChainsAttainable) {
    Rng rng(54);
    oracle::Gen gen(55);
    for (int t = 0; t < 50; ++t) {
        auto s = StateSpace::indexed(2 + uniform_index(rng, 4));
        Capacity nu = random_supermodular_capacity(s, rng);
        Mask b = static_cast<Mask>(gen.index(s->event_count()));
        Mask a = b & static_cast<Mask>(gen.index(s->event_count()));
        EXPECT_TRUE(chain_attainable(nu, {a, b, s->full_mask()}));
    }
}

} // namespace
} // namespace crdu
