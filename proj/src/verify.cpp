#include "crdu/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "crdu/models.hpp"
#include "crdu/sampling.hpp"

namespace crdu {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::size_t states_between(Rng& rng, std::size_t lo, std::size_t hi) { return lo + uniform_index(rng, hi - lo + 1); }

// Runs `trial` once per trial; a trial returns an empty string on success.
SuiteResult repeat(const std::string& name, std::size_t trials, std::uint64_t seed,
                   const std::function<std::string(Rng&, std::size_t)>& trial) {
    SuiteResult r{name, trials, 0, {}, {}};
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        std::string why = trial(rng, t);
        if (why.empty())
            ++r.passed;
        else if (r.first_failure.empty())
            r.first_failure = "trial " + std::to_string(t) + ": " + why;
    }
    return r;
}

SuiteResult maxmin_suite(std::size_t trials, std::uint64_t seed) {
    return repeat("maxmin", trials, seed, [](Rng& rng, std::size_t) -> std::string {
        SpacePtr space = StateSpace::indexed(states_between(rng, 2, 5));
        Capacity nu = random_supermodular_capacity(space, rng);
        UtilityFunction u = random_utility(rng, -5.0, 5.0);
        DistortionFunction g = random_distortion(rng);
        Capacity gnu = compose(g, nu);
        for (int k = 0; k < 10; ++k) {
            Act x = random_act(space, rng, -5.0, 5.0);
            RobustValue rv = robust_value(u, g, nu, x);
            double c = choquet(x.map([&](double v) { return u(v); }), gnu);
            if (std::abs(rv.value - c) > 1e-7)
                return "robust " + fmt(rv.value) + " vs Choquet " + fmt(c) + " for X = " + x.to_string();
        }
        return {};
    });
}

SuiteResult main_suite(std::size_t trials, std::uint64_t seed) {
    return repeat("main", trials, seed, [](Rng& rng, std::size_t) -> std::string {
        ModelOptions opt;
        opt.states = states_between(rng, 2, 5);
        opt.max_blocks = 3;
        opt.supermodular = true;
        opt.utility_shape = Shape::Concave;
        opt.distortion_shape = Shape::Convex;
        ModelSpec m = random_crdu_model(rng, opt);
        AttitudeReport rep = attitude_report(m);
        if (!rep.sra.holds) return "SRA flag fails: " + rep.sra.witness;
        if (!rep.ds.holds) return "DS flag fails: " + rep.ds.witness;
        for (int k = 0; k < 20; ++k) {
            Act x = random_act(m.space(), rng, -4.0, 4.0);
            Act w = random_act(m.space(), rng, -4.0, 4.0);
            const double target = value(m, x);
            auto f = [&](double c) { return value(m, w + c); };
            const double c_lo = -5.0 - w.min(), c_hi = 5.0 - w.max();
            if (!(f(c_lo) <= target && target <= f(c_hi))) continue;
            Act y = w + bisect_increasing(f, target, c_lo, c_hi, 1e-14);
            const double lambda = uniform(rng, 0.0, 1.0);
            const double mixed = value(m, Act::mix(x, y, lambda));
            if (mixed < target - 1e-9)
                return "mixture loses value: " + fmt(mixed) + " < " + fmt(target) + " for X = " + x.to_string();
        }
        return {};
    });
}

SuiteResult comam_suite(std::size_t trials, std::uint64_t seed) {
    return repeat("comam", trials, seed, [seed](Rng& rng, std::size_t t) -> std::string {
        ModelOptions opt;
        opt.states = states_between(rng, 2, 5);
        opt.max_blocks = 3;
        ModelSpec m1 = random_crdu_model(rng, opt);
        const auto& nu1 = m1.capacity();
        Capacity other = random_risk_conforming_capacity(m1.partition(), m1.reference(), rng);
        Capacity nu2 = Capacity::from_function(m1.space(), [&](Mask a) { return std::min(nu1(a), other(a)); });
        ModelSpec m2 = ModelSpec::crdu(m1.utility(), m1.distortion(), nu2, m1.partition(), m1.reference());
        ComparativeResult c = comparative_full(m1, m2);
        if (!c.holds) return "setwise comparison fails: " + c.witness;
        if (!c.behavioral) return "behavioral comparison fails: " + c.witness;
        EpCheck ep = comparative_sampled_check(m1, m2, 200, seed + 7919 * (t + 1));
        if (!ep.holds()) return "sampled check fails at X = " + ep.witness_x->to_string();
        return {};
    });
}

SuiteResult family_suite(std::size_t trials, std::uint64_t seed) {
    return repeat("family", trials, seed, [](Rng& rng, std::size_t) -> std::string {
        ModelOptions opt;
        opt.states = states_between(rng, 2, 5);
        opt.max_blocks = 3;
        opt.null_chance = 0.3;
        ModelSpec m = random_crdu_model(rng, opt);
        Check a = family_property_a(m);
        if (!a) return "property (a) fails: " + a.detail;
        for (int k = 0; k < 100; ++k) {
            Act x = random_act(m.space(), rng, -5.0, 5.0);
            if (k % 3 == 0) x = x.map([](double v) { return std::round(v); });
            const double fv = family_representation_value(m, x), v = value(m, x);
            if (std::abs(fv - v) > 1e-9) return "family value " + fmt(fv) + " vs " + fmt(v) + " for X = " + x.to_string();
            Check c = family_property_c_indicators(m, x);
            if (!c) return "property (c) fails for X = " + x.to_string() + ": " + c.detail;
        }
        auto pair = random_comonotone_acts(m.space(), rng, 2, -5.0, 5.0);
        Check c = family_property_c(m, pair[0], pair[1]);
        if (!c) return "property (c) fails on a comonotone pair: " + c.detail;
        return {};
    });
}

SuiteResult latt_suite(std::size_t trials, std::uint64_t seed) {
    return repeat("latt", trials, seed, [](Rng& rng, std::size_t) -> std::string {
        SpacePtr space = StateSpace::indexed(states_between(rng, 2, 6));
        Capacity phi = random_supermodular_capacity(space, rng);
        DistortionFunction f = random_distortion(rng, Shape::Convex);
        Check sup = supermodularity(compose(f, phi));
        if (!sup) return "f o phi not supermodular with f = " + f.to_string();
        DistortionFunction h = random_distortion(rng, Shape::Concave);
        Check sub = submodularity(compose(h, phi.dual()));
        if (!sub) return "h o phi* not submodular with h = " + h.to_string();
        return {};
    });
}

SuiteResult counterexample_suite(std::size_t trials) {
    SpacePtr space = product_space(2, 2);
    ProbabilityMeasure p = ProbabilityMeasure::uniform(space);
    Counterexample ce = construct_counterexample(2, 2, p, DistortionFunction::power(0.5));
    ModelSpec m = ModelSpec::crdu(UtilityFunction::exponential(1.0).normalized(), ce.g, ce.nu, ce.g_partition, p);
    const Mask a0 = ce.h_partition.blocks()[0];
    const Mask full = space->full_mask();

    bool conforming = is_risk_conforming(ce.nu, ce.g_partition, p);
    bool h_algebra = true;
    for (Mask b : ce.h_partition.algebra())
        h_algebra = h_algebra && std::abs(ce.nu(b) - ce.h(p.probability(b))) <= kEventTolerance;
    bool sandwich = true;
    for (Mask a = 0; a <= full; ++a) {
        const double pa = p.probability(a);
        sandwich = sandwich && ce.h(pa) >= ce.nu(a) - kEventTolerance && ce.nu(a) >= pa - kEventTolerance;
    }
    bool gnu_super = is_supermodular(compose(ce.g, ce.nu));
    const double sum = ce.nu(a0) + ce.nu(full & ~a0);
    AttitudeReport rep = attitude_report(m);
    bool sum_ok = std::abs(sum - std::sqrt(2.0)) <= 1e-9 && std::abs(sum - 1.414214) <= 1e-6;
    bool flags = !rep.aa.holds && rep.ds.holds;

    SuiteResult r{"counterexample", trials, 0, {}, {}};
    auto line = [&](const std::string& what, bool ok) { r.lines.push_back(what + ": " + (ok ? "true" : "false")); };
    line("risk conforming", conforming);
    line("nu = h o P on the H-algebra", h_algebra);
    line("h(P(A)) >= nu(A) >= P(A) on all events", sandwich);
    line("g o nu supermodular", gnu_super);
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << sum;
    r.lines.push_back("nu(A0) + nu(A0^c) = " + os.str());
    line("AA", rep.aa.holds);
    line("DS", rep.ds.holds);
    const bool all = conforming && h_algebra && sandwich && gnu_super && sum_ok && flags;
    r.passed = all ? trials : 0;
    if (!all) r.first_failure = "a counterexample property did not reproduce";
    return r;
}

SuiteResult dv_suite(std::size_t trials, std::uint64_t seed) {
    return repeat("dv", trials, seed, [](Rng& rng, std::size_t) -> std::string {
        SpacePtr space = StateSpace::indexed(3);
        ProbabilityMeasure p = random_measure(space, rng);
        Act x = random_act(space, rng, -2.0, 2.0);
        const double beta = std::exp(uniform(rng, std::log(0.5), std::log(5.0)));
        double s = 0.0;
        for (std::size_t i = 0; i < 3; ++i) s += p.weight(i) * std::exp(-x[i] / beta);
        const double closed = -beta * std::log(s);
        const double grid = dv_grid_minimum(x, beta, p);
        if (std::abs(grid - closed) > 1e-4)
            return "grid " + fmt(grid) + " vs closed form " + fmt(closed) + " at beta = " + fmt(beta);
        return {};
    });
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"maxmin", "main", "comam", "family", "latt", "counterexample", "dv"};
    return names;
}

SuiteResult run_suite(const std::string& name, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    if (name == "maxmin") return maxmin_suite(trials, seed);
    if (name == "main") return main_suite(trials, seed);
    if (name == "comam") return comam_suite(trials, seed);
    if (name == "family") return family_suite(trials, seed);
    if (name == "latt") return latt_suite(trials, seed);
    if (name == "counterexample") return counterexample_suite(trials);
    if (name == "dv") return dv_suite(trials, seed);
    throw DomainError("unknown verification suite '" + name + "'");
}

double dv_grid_minimum(const Act& x, double beta, const ProbabilityMeasure& p) {
    if (x.size() != 3 || p.size() != 3) throw DomainError("the grid search runs on three states");
    auto objective = [&](double m0, double m1) {
        const double mu[3] = {m0, m1, 1.0 - m0 - m1};
        double f = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (mu[i] <= 0.0) continue;
            if (p.weight(i) <= 0.0) return std::numeric_limits<double>::infinity();
            f += mu[i] * x[i] + beta * mu[i] * std::log(mu[i] / p.weight(i));
        }
        return f;
    };
    constexpr int kCells = 40;
    double c0 = 1.0 / 3.0, c1 = 1.0 / 3.0, half = 0.5;
    double best = objective(c0, c1);
    while (half > 1e-12) {
        double b0 = c0, b1 = c1;
        for (int i = 0; i <= kCells; ++i)
            for (int j = 0; j <= kCells; ++j) {
                const double m0 = std::clamp(c0 - half + 2.0 * half * i / kCells, 0.0, 1.0);
                const double m1 = std::clamp(c1 - half + 2.0 * half * j / kCells, 0.0, 1.0);
                if (m0 + m1 > 1.0) continue;
                const double f = objective(m0, m1);
                if (f < best) {
                    best = f;
                    b0 = m0;
                    b1 = m1;
                }
            }
        c0 = b0;
        c1 = b1;
        half *= 0.25;
    }
    return best;
}

} // namespace crdu
