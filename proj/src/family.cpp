#include <algorithm>
#include <cmath>

#include "crdu/models.hpp"

namespace crdu {

namespace {

constexpr double kLevelTol = 1e-12;

std::vector<double> distinct_payoffs(const Act& x) {
    std::vector<double> v(x.payoff().begin(), x.payoff().end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Builds the entry without the P-consistency precondition; callers check it.
DistortionFamilyEntry build_entry(const ModelSpec& m, const Act& x) {
    const auto& p = m.reference();
    const auto& g = m.distortion();
    const auto& nu = m.capacity();
    // Thresholds below min X give level 1 with nu(Omega) = 1.
    std::vector<std::pair<double, double>> raw{{1.0, g(1.0)}};
    for (double v : distinct_payoffs(x)) {
        Mask up = x.strict_upper_set(v);
        raw.emplace_back(p.probability(up), g(nu(up)));
    }
    std::sort(raw.begin(), raw.end());
    DistortionFamilyEntry e{x, {}, {}};
    for (const auto& [alpha, val] : raw) {
        if (!e.levels.empty() && alpha - e.levels.back() <= kLevelTol) {
            if (std::abs(val - e.values.back()) > kLevelTol)
                throw DomainError("distortion family not well defined at level " + std::to_string(alpha) +
                                  ": capacity not P-consistent");
            continue;
        }
        e.levels.push_back(alpha);
        e.values.push_back(val);
    }
    return e;
}

} // namespace

std::optional<double> DistortionFamilyEntry::at(double alpha) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (std::abs(levels[i] - alpha) <= kLevelTol) return values[i];
    return std::nullopt;
}

DistortionFamilyEntry derive_distortion_family(const ModelSpec& m, const Act& x) {
    require_same_space(m.space(), x.space(), "derive_distortion_family");
    Check c = p_consistency(m.capacity(), m.reference());
    if (!c) throw DomainError("capacity not P-consistent on {" + mask_key(*m.space(), c.witness[0]) + "}");
    return build_entry(m, x);
}

double family_representation_value(const ModelSpec& m, const Act& x) {
    auto e = derive_distortion_family(m, x);
    const auto& p = m.reference();
    const auto& u = m.utility();
    double sum = 0.0;
    for (double v : distinct_payoffs(x)) {
        Mask gt = x.strict_upper_set(v);
        Mask ge = gt;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] == v) ge |= Mask{1} << i;
        auto hi = e.at(p.probability(ge));
        auto lo = e.at(p.probability(gt));
        // P(X >= v) is P(X > v') for the next lower payoff, or 1.
        if (!hi || !lo) throw InvariantViolation("level missing from the distortion family");
        sum += u(v) * (*hi - *lo);
    }
    return sum;
}

Check family_property_a(const ModelSpec& m) {
    const auto& nu = m.capacity();
    const auto& p = m.reference();
    Check pc = p_consistency(nu, p);
    if (!pc) throw DomainError("capacity not P-consistent");
    const SpacePtr& space = m.space();
    const Mask full = space->full_mask();
    std::vector<DistortionFamilyEntry> entries;
    entries.reserve(space->event_count());
    for (Mask a = 0;; ++a) {
        entries.push_back(build_entry(m, Act::indicator(Event(space, a))));
        if (a == full) break;
    }
    for (Mask b = 0;; ++b) {
        // Every A within B, by submask enumeration.
        for (Mask a = b;; a = (a - 1) & b) {
            const auto& ea = entries[a];
            const auto& eb = entries[b];
            for (std::size_t i = 0; i < ea.levels.size(); ++i) {
                auto other = eb.at(ea.levels[i]);
                if (other && ea.values[i] > *other + kLevelTol)
                    return Check::fail({a, b}, "g_{1_A} exceeds g_{1_B} at a shared level");
            }
            if (a == 0) break;
        }
        if (b == full) break;
    }
    return Check::pass();
}

Check family_property_c(const ModelSpec& m, const Act& x, const Act& y) {
    if (!comonotonic(x, y)) throw DomainError("acts are not comonotonic");
    auto ex = derive_distortion_family(m, x);
    auto ey = build_entry(m, y);
    for (std::size_t i = 0; i < ex.levels.size(); ++i) {
        auto other = ey.at(ex.levels[i]);
        if (other && std::abs(ex.values[i] - *other) > kLevelTol)
            return Check::fail({}, "g_X and g_Y differ at level " + std::to_string(ex.levels[i]));
    }
    return Check::pass();
}

Check family_property_c_indicators(const ModelSpec& m, const Act& x) {
    for (double v : distinct_payoffs(x)) {
        Mask up = x.strict_upper_set(v);
        Check c = family_property_c(m, x, Act::indicator(Event(m.space(), up)));
        if (!c) return Check::fail({up}, c.detail);
    }
    return Check::pass();
}

bool family_entry_ambiguity_averse(const ModelSpec& m, const DistortionFamilyEntry& e) {
    const auto& g = m.distortion();
    for (std::size_t i = 0; i < e.levels.size(); ++i)
        if (e.values[i] > g(e.levels[i]) + kLevelTol) return false;
    return true;
}

} // namespace crdu
