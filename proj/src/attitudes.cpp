#include <algorithm>
#include <cmath>
#include <limits>

#include "crdu/models.hpp"
#include "crdu/sampling.hpp"

namespace crdu {

namespace {

void require_capacity_kind(const ModelSpec& m, const char* what) {
    if (!m.has_capacity()) throw DomainError(std::string(what) + " needs a CRDU, CEU or Dual model, got " + m.kind_name());
}

std::string key(const ModelSpec& m, Mask a) { return "{" + mask_key(*m.space(), a) + "}"; }

Flag flag_of(const ModelSpec& m, const Check& c, const std::string& prefix = {}) {
    Flag f{c.holds, {}};
    if (!c.holds) {
        f.witness = prefix;
        for (Mask w : c.witness) f.witness += (f.witness.empty() ? "" : " ") + key(m, w);
        if (!c.detail.empty()) f.witness += (f.witness.empty() ? "" : ": ") + c.detail;
    }
    return f;
}

// Payoff interval shared by both utilities, capped to [-5, 5].
std::pair<double, double> payoff_range(const UtilityFunction& u1, const UtilityFunction& u2) {
    return {std::max({u1.lo(), u2.lo(), -5.0}), std::min({u1.hi(), u2.hi(), 5.0})};
}

} // namespace

AttitudeReport attitude_report(const ModelSpec& m) {
    require_capacity_kind(m, "attitude report");
    const auto& nu = m.capacity();
    const auto& p = m.reference();
    const bool u_concave = m.utility().is_concave();
    AttitudeReport r;
    r.an = flag_of(m, additivity(nu));
    r.aa.holds = is_balanced(nu);
    if (!r.aa.holds) r.aa.witness = "empty core";
    r.raa = flag_of(m, core_membership(nu, p), "P(A) < nu(A) at");
    if (!u_concave)
        r.ds = {false, "u not concave"};
    else
        r.ds = flag_of(m, supermodularity(m.weights()), "g o nu not supermodular at");
    if (!u_concave)
        r.sra = {false, "u not concave"};
    else if (!m.distortion().is_convex())
        r.sra = {false, "g not convex"};
    else
        r.sra = {true, {}};
    r.nsc = flag_of(m, p_consistency(nu, p), "nu(A) != nu(A u N) at");
    if (!r.nsc.holds) {
        r.family = {false, "distortion family undefined: nu not P-consistent"};
    } else {
        r.family.holds = true;
        const Mask full = m.space()->full_mask();
        for (Mask a = 0;; ++a) {
            auto e = derive_distortion_family(m, Act::indicator(Event(m.space(), a)));
            if (!family_entry_ambiguity_averse(m, e)) {
                r.family = {false, "g_X > g for X = 1_" + key(m, a)};
                break;
            }
            if (a == full) break;
        }
    }
    return r;
}

ComparativeResult more_ambiguity_averse(const ModelSpec& m1, const ModelSpec& m2) {
    require_capacity_kind(m1, "comparative ambiguity aversion");
    require_capacity_kind(m2, "comparative ambiguity aversion");
    require_same_space(m1.space(), m2.space(), "comparative ambiguity aversion");
    if (!(m1.partition() == m2.partition()) || !(m1.reference() == m2.reference()))
        throw DomainError("models must share the risk partition and the reference measure");
    ComparativeResult out;
    Check c = setwise_dominance(m1.capacity(), m2.capacity());
    out.holds = c.holds;
    if (!c.holds) out.witness = "nu2 > nu1 at " + key(m1, c.witness[0]);

    // R >=_1 A implies R >=_2 A for risky R and every event A.
    out.behavioral = true;
    const auto risky = m1.partition().algebra();
    const Mask full = m1.space()->full_mask();
    std::vector<double> r1, r2;
    for (Mask r : risky) {
        r1.push_back(value(m1, Act::indicator(Event(m1.space(), r))));
        r2.push_back(value(m2, Act::indicator(Event(m2.space(), r))));
    }
    for (Mask a = 0; out.behavioral; ++a) {
        const double a1 = value(m1, Act::indicator(Event(m1.space(), a)));
        const double a2 = value(m2, Act::indicator(Event(m2.space(), a)));
        for (std::size_t k = 0; k < risky.size(); ++k) {
            if (r1[k] >= a1 - kIndifference && r2[k] < a2 - kIndifference) {
                out.behavioral = false;
                if (out.witness.empty()) out.witness = "1_" + key(m1, risky[k]) + " vs 1_" + key(m1, a);
                break;
            }
        }
        if (a == full) break;
    }
    return out;
}

ComparativeResult comparative_full(const ModelSpec& m1, const ModelSpec& m2) {
    require_capacity_kind(m1, "comparative ambiguity aversion");
    require_capacity_kind(m2, "comparative ambiguity aversion");
    const auto& u1 = m1.utility();
    const auto& u2 = m2.utility();
    auto [lo, hi] = payoff_range(u1, u2);
    constexpr int kGrid = 200;
    constexpr double kTol = 1e-9;
    for (int i = 0; i <= kGrid; ++i) {
        double x = lo + (hi - lo) * i / kGrid;
        if (std::abs(u1(x) - u2(x)) > kTol) return {false, false, "utilities differ at x = " + std::to_string(x)};
        double t = static_cast<double>(i) / kGrid;
        if (std::abs(m1.distortion()(t) - m2.distortion()(t)) > kTol)
            return {false, false, "distortions differ at t = " + std::to_string(t)};
    }
    return more_ambiguity_averse(m1, m2);
}

EpCheck comparative_sampled_check(const ModelSpec& m1, const ModelSpec& m2, std::size_t pairs, std::uint64_t seed) {
    require_same_space(m1.space(), m2.space(), "comparative sampled check");
    Rng rng(seed);
    auto [lo, hi] = payoff_range(m1.utility(), m2.utility());
    const auto& part = m1.partition();
    EpCheck out;
    out.pairs = pairs;
    for (std::size_t k = 0; k < pairs; ++k) {
        Act x = random_measurable_act(part, rng, lo, hi);
        Act y = random_act(m1.space(), rng, lo, hi);
        if (k % 2 == 1) {
            // Shift Y by a constant towards indifference with X under m1.
            const double target = value(m1, x);
            const double c_lo = lo - y.min(), c_hi = hi - y.max();
            auto f = [&](double c) { return value(m1, y + c); };
            if (c_lo < c_hi && f(c_lo) <= target && target <= f(c_hi))
                y = y + bisect_increasing(f, target, c_lo, c_hi, 1e-14);
        }
        const double d1 = value(m1, x) - value(m1, y);
        const double d2 = value(m2, x) - value(m2, y);
        const bool weak_ok = !(d1 >= -kIndifference) || d2 >= -kIndifference;
        const bool strict_ok = !(d1 > kIndifference) || d2 > kIndifference;
        if (weak_ok && strict_ok) {
            ++out.passed;
        } else if (!out.witness_x) {
            out.witness_x = x;
            out.witness_y = y;
        }
    }
    return out;
}

} // namespace crdu
