#include <gtest/gtest.h>

#include "crdu/sampling.hpp"
#include "crdu/verify.hpp"
#include "oracles.hpp"

namespace crdu {
namespace {

TEST(SamplingTest, Deterministic) {
    Rng a(5), b(5);
    auto s = StateSpace::indexed(4);
    EXPECT_EQ(random_capacity(s, a), random_capacity(s, b));
    EXPECT_EQ(random_act(s, a, -1, 1), random_act(s, b, -1, 1));
}

TEST(SamplingTest, MeasureWithNulls) {
    Rng rng(6);
    auto s = StateSpace::indexed(5);
    for (int t = 0; t < 100; ++t) {
        auto p = random_measure(s, rng, 0.5);
        EXPECT_NE(p.support_mask(), Mask{0});
    }
}

TEST(SamplingTest, RiskConformingCapacity) {
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        auto s = StateSpace::indexed(2 + uniform_index(rng, 5));
        auto p = random_measure(s, rng, 0.3);
        auto part = random_partition(s, rng, 3);
        Capacity nu = random_risk_conforming_capacity(part, p, rng);
        EXPECT_TRUE(is_risk_conforming(nu, part, p));
        EXPECT_TRUE(is_P_consistent(nu, p));
    }
}

TEST(SamplingTest, SupermodularCapacity) {
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        auto s = StateSpace::indexed(2 + uniform_index(rng, 5));
        auto p = random_measure(s, rng, 0.3);
        auto part = random_partition(s, rng, 3);
        Capacity nu = random_supermodular_capacity(part, p, rng);
        EXPECT_TRUE(oracle::supermodular_pairs(oracle::table_of(nu), s->size()));
        EXPECT_TRUE(is_risk_conforming(nu, part, p));
        EXPECT_TRUE(is_P_consistent(nu, p));
    }
}

TEST(SamplingTest, Shapes) {
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        EXPECT_TRUE(random_distortion(rng, Shape::Convex).is_convex());
        EXPECT_TRUE(random_distortion(rng, Shape::Concave).is_concave());
        EXPECT_TRUE(random_distortion(rng).is_strictly_increasing());
        auto u = random_utility(rng, -2, 2, Shape::Concave);
        EXPECT_TRUE(u.is_concave());
        EXPECT_TRUE(u.is_normalized());
        EXPECT_TRUE(u.in_domain(-2) && u.in_domain(2));
    }
}

TEST(SamplingTest, ComonotoneActs) {
    Rng rng(10);
    auto s = StateSpace::indexed(5);
    auto acts = random_comonotone_acts(s, rng, 6, -3, 3);
    for (const auto& x : acts)
        for (const auto& y : acts) EXPECT_TRUE(comonotonic(x, y));
}

TEST(SamplingTest, CoinFlipRisk) {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        auto s = StateSpace::indexed(2 + uniform_index(rng, 5));
        auto [part, p] = random_coin_flip_risk(s, rng, 3);
        EXPECT_TRUE(coin_flip_event(part, p).has_value());
    }
}

TEST(VerifyTest, SuitesPass) {
    for (const auto& name : suite_names()) {
        auto r = run_suite(name, name == "maxmin" ? 10 : 3, 17);
        EXPECT_TRUE(r.ok()) << name << ": " << r.first_failure;
    }
    EXPECT_THROW(run_suite("nope", 1, 1), DomainError);
    EXPECT_THROW(run_suite("latt", 0, 1), DomainError);
}

TEST(VerifyTest, DvGridOnKnownMinimum) {
    auto s = StateSpace::indexed(3);
    auto p = ProbabilityMeasure::uniform(s);
    // Constant act: the minimum sits at mu = P with value the constant.
    EXPECT_NEAR(dv_grid_minimum(Act::constant(s, 1.25), 2.0, p), 1.25, 1e-9);
}

} // namespace
} // namespace crdu
