#include "crdu/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crdu {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

namespace {

std::vector<double> dirichlet(Rng& rng, std::size_t k) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(k);
    double s = 0.0;
    for (double& v : w) s += (v = e(rng) + 1e-3);
    for (double& v : w) v /= s;
    return w;
}

std::vector<std::size_t> states_of(Mask m, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (mask_contains(m, i)) out.push_back(i);
    return out;
}

// Random positive slopes over random cells of [0,1], ordered by shape,
// rescaled to reach (1,1).
std::vector<Point> random_curve(Rng& rng, Shape shape) {
    std::size_t k = 2 + uniform_index(rng, 3);
    std::vector<double> xs{0.0, 1.0};
    for (std::size_t i = 1; i < k; ++i) xs.push_back(uniform(rng, 0.05, 0.95));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> slopes(xs.size() - 1);
    for (double& s : slopes) s = uniform(rng, 0.2, 3.0);
    if (shape == Shape::Convex) std::sort(slopes.begin(), slopes.end());
    if (shape == Shape::Concave) std::sort(slopes.rbegin(), slopes.rend());
    std::vector<Point> pts{{0.0, 0.0}};
    double y = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        y += slopes[i] * (xs[i + 1] - xs[i]);
        pts.emplace_back(xs[i + 1], y);
    }
    for (auto& p : pts) p.second /= y;
    pts.back() = {1.0, 1.0};
    return pts;
}

double random_gamma(Rng& rng, Shape shape) {
    switch (shape) {
    case Shape::Convex: return std::exp(uniform(rng, 0.0, std::log(3.0)));
    case Shape::Concave: return std::exp(uniform(rng, std::log(0.3), 0.0));
    case Shape::Any: break;
    }
    return std::exp(uniform(rng, std::log(0.3), std::log(3.0)));
}

// phi on the subsets of `support`, supermodular and normalized to 1 on it.
std::vector<double> block_supermodular(std::size_t n, Mask support, Rng& rng) {
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> phi(count, 0.0);
    auto members = states_of(support, n);
    std::size_t terms = 1 + uniform_index(rng, 3);
    auto mix = dirichlet(rng, terms);
    for (std::size_t t = 0; t < terms; ++t) {
        if (members.size() > 1 && uniform(rng, 0.0, 1.0) < 0.3) {
            // Unanimity game on a random nonempty subset of the support.
            Mask carrier = 0;
            while (carrier == 0)
                for (auto s : members)
                    if (uniform(rng, 0.0, 1.0) < 0.5) carrier |= Mask{1} << s;
            for (std::size_t a = 0; a < count; ++a)
                if (mask_subset(carrier, static_cast<Mask>(a))) phi[a] += mix[t];
            continue;
        }
        auto w = dirichlet(rng, members.size());
        DistortionFunction f = random_distortion(rng, Shape::Convex);
        for (std::size_t a = 0; a < count; ++a) {
            double m = 0.0;
            for (std::size_t j = 0; j < members.size(); ++j)
                if (mask_contains(static_cast<Mask>(a), members[j])) m += w[j];
            phi[a] += mix[t] * f(std::min(m, 1.0));
        }
    }
    return phi;
}

} // namespace

ProbabilityMeasure random_measure(const SpacePtr& space, Rng& rng, double null_chance) {
    const std::size_t n = space->size();
    std::vector<double> w = dirichlet(rng, n);
    std::size_t keep = uniform_index(rng, n);
    for (std::size_t i = 0; i < n; ++i)
        if (i != keep && uniform(rng, 0.0, 1.0) < null_chance) w[i] = 0.0;
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= s;
    return ProbabilityMeasure(space, std::move(w));
}

RiskPartition random_partition(const SpacePtr& space, Rng& rng, std::size_t max_blocks) {
    std::vector<Mask> blocks(std::max<std::size_t>(max_blocks, 1), 0);
    for (std::size_t i = 0; i < space->size(); ++i) blocks[uniform_index(rng, blocks.size())] |= Mask{1} << i;
    blocks.erase(std::remove(blocks.begin(), blocks.end(), Mask{0}), blocks.end());
    return RiskPartition(space, std::move(blocks));
}

Capacity random_capacity(const SpacePtr& space, Rng& rng) {
    const std::size_t n = space->size(), count = space->event_count();
    std::vector<double> xi(count, 0.0);
    for (std::size_t a = 1; a < count; ++a) {
        double v = uniform(rng, 0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            if (mask_contains(static_cast<Mask>(a), i)) v = std::max(v, xi[a & ~(std::size_t{1} << i)]);
        xi[a] = v;
    }
    const double top = xi[count - 1];
    for (double& v : xi) v /= top;
    return Capacity(space, std::move(xi));
}

Capacity random_risk_conforming_capacity(const RiskPartition& part, const ProbabilityMeasure& p, Rng& rng) {
    const SpacePtr& space = p.space();
    require_same_space(space, part.space(), "random_risk_conforming_capacity");
    Capacity xi = random_capacity(space, rng);
    const Mask support = p.support_mask();
    return Capacity::from_function(space, [&](Mask a) {
        // Risky events get P exactly so conformity holds bit for bit.
        if (part.measurable(a)) return p.probability(a);
        double lower = 0.0, upper = 0.0;
        for (Mask b : part.blocks()) {
            if (p.probability(b & ~a) == 0.0) lower += p.probability(b);
            if (p.probability(b & a) > 0.0) upper += p.probability(b);
        }
        return std::clamp(xi(a & support), lower, upper);
    });
}

Capacity random_supermodular_capacity(const RiskPartition& part, const ProbabilityMeasure& p, Rng& rng) {
    const SpacePtr& space = p.space();
    require_same_space(space, part.space(), "random_supermodular_capacity");
    const std::size_t n = space->size(), count = space->event_count();
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> nu(count, 0.0);
        for (Mask b : part.blocks()) {
            const double pb = p.probability(b);
            const Mask support = b & p.support_mask();
            if (pb == 0.0) continue;
            auto phi = block_supermodular(n, support, rng);
            for (std::size_t a = 0; a < count; ++a) nu[a] += pb * phi[a & support];
        }
        nu[0] = 0.0;
        nu[count - 1] = 1.0;
        // Risky events get P exactly so conformity holds bit for bit.
        for (Mask u : part.algebra()) nu[u] = p.probability(u);
        Capacity c(space, std::move(nu));
        if (is_supermodular(c)) return c;
    }
    throw InvariantViolation("could not draw a supermodular capacity");
}

Capacity random_supermodular_capacity(const SpacePtr& space, Rng& rng) {
    return random_supermodular_capacity(RiskPartition::trivial(space), ProbabilityMeasure::uniform(space), rng);
}

DistortionFunction random_distortion(Rng& rng, Shape shape) {
    if (uniform(rng, 0.0, 1.0) < 0.5) return DistortionFunction::power(random_gamma(rng, shape));
    return DistortionFunction::piecewise_linear(random_curve(rng, shape));
}

UtilityFunction random_utility(Rng& rng, double lo, double hi, Shape shape) {
    const double r = uniform(rng, 0.0, 1.0);
    if (r < 0.15) return UtilityFunction::identity().normalized();
    if (lo >= 0.0 && r < 0.5) return UtilityFunction::power(random_gamma(rng, shape)).normalized();
    if (shape != Shape::Convex && r < 0.7)
        return UtilityFunction::exponential(std::exp(uniform(rng, std::log(0.5), std::log(5.0)))).normalized();
    // Piecewise linear over a padded domain, kinks spread across it.
    const double a = std::min(lo, 0.0) - 1.0, b = std::max(hi, 1.0) + 1.0;
    auto curve = random_curve(rng, shape);
    std::vector<Point> pts;
    for (const auto& [x, y] : curve) pts.emplace_back(a + x * (b - a), y);
    return UtilityFunction::piecewise_linear(std::move(pts)).normalized();
}

Act random_act(const SpacePtr& space, Rng& rng, double lo, double hi) {
    std::vector<double> v(space->size());
    for (double& x : v) x = uniform(rng, lo, hi);
    return Act(space, std::move(v));
}

Act random_measurable_act(const RiskPartition& part, Rng& rng, double lo, double hi) {
    std::vector<double> v(part.space()->size());
    for (Mask b : part.blocks()) {
        double x = uniform(rng, lo, hi);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (mask_contains(b, i)) v[i] = x;
    }
    return Act(part.space(), std::move(v));
}

std::vector<Act> random_comonotone_acts(const SpacePtr& space, Rng& rng, std::size_t count, double lo, double hi) {
    const std::size_t n = space->size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Act> out;
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<double> vals(n);
        const bool ties = uniform(rng, 0.0, 1.0) < 0.3;
        for (double& x : vals) {
            x = uniform(rng, lo, hi);
            if (ties) x = std::clamp(std::round(x), lo, hi);
        }
        std::sort(vals.begin(), vals.end());
        std::vector<double> payoff(n);
        for (std::size_t k = 0; k < n; ++k) payoff[order[k]] = vals[k];
        out.emplace_back(space, std::move(payoff));
    }
    return out;
}

std::pair<RiskPartition, ProbabilityMeasure> random_coin_flip_risk(const SpacePtr& space, Rng& rng,
                                                                   std::size_t max_blocks) {
    const std::size_t n = space->size();
    if (n < 2) throw DomainError("a coin-flip event needs at least two states");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t k = std::clamp<std::size_t>(2 + uniform_index(rng, std::max<std::size_t>(max_blocks, 2) - 1), 2, n);
    // Cut the shuffled states into k nonempty blocks.
    std::vector<std::size_t> cuts(n - 1);
    std::iota(cuts.begin(), cuts.end(), std::size_t{1});
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(k - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(n);
    std::vector<Mask> blocks;
    std::size_t start = 0;
    for (std::size_t c : cuts) {
        Mask b = 0;
        for (std::size_t i = start; i < c; ++i) b |= Mask{1} << order[i];
        blocks.push_back(b);
        start = c;
    }
    // Split the blocks in two nonempty groups of mass 1/2 each.
    const std::size_t split = 1 + uniform_index(rng, k - 1);
    std::vector<double> w(n, 0.0);
    for (std::size_t group = 0; group < 2; ++group) {
        const std::size_t b0 = group == 0 ? 0 : split, b1 = group == 0 ? split : k;
        auto mass = dirichlet(rng, b1 - b0);
        for (std::size_t b = b0; b < b1; ++b) {
            auto members = states_of(blocks[b], n);
            auto inner = dirichlet(rng, members.size());
            for (std::size_t j = 0; j < members.size(); ++j) w[members[j]] = 0.5 * mass[b - b0] * inner[j];
        }
    }
    return {RiskPartition(space, std::move(blocks)), ProbabilityMeasure(space, std::move(w))};
}

namespace {

ProbabilityMeasure with_nulls(const RiskPartition& part, const ProbabilityMeasure& p, Rng& rng, double chance) {
    // Zero out states inside blocks, keeping every block's mass on a survivor.
    std::vector<double> w(p.weights().begin(), p.weights().end());
    const std::size_t n = w.size();
    for (Mask b : part.blocks()) {
        auto members = states_of(b, n);
        if (members.size() < 2) continue;
        std::size_t keep = members[uniform_index(rng, members.size())];
        double moved = 0.0;
        for (auto s : members)
            if (s != keep && uniform(rng, 0.0, 1.0) < chance) {
                moved += w[s];
                w[s] = 0.0;
            }
        w[keep] += moved;
    }
    return ProbabilityMeasure(p.space(), std::move(w));
}

} // namespace

ModelSpec random_crdu_model(Rng& rng, const ModelOptions& opt) {
    SpacePtr space = StateSpace::indexed(opt.states);
    auto [part, p] = random_coin_flip_risk(space, rng, opt.max_blocks);
    if (opt.null_chance > 0.0) p = with_nulls(part, p, rng, opt.null_chance);
    Capacity nu = opt.supermodular ? random_supermodular_capacity(part, p, rng)
                                   : random_risk_conforming_capacity(part, p, rng);
    UtilityFunction u = random_utility(rng, opt.payoff_lo, opt.payoff_hi, opt.utility_shape);
    DistortionFunction g = random_distortion(rng, opt.distortion_shape);
    return ModelSpec::crdu(std::move(u), std::move(g), std::move(nu), std::move(part), std::move(p));
}

ModelSpec random_dual_model(Rng& rng, const ModelOptions& opt) {
    SpacePtr space = StateSpace::indexed(opt.states);
    auto [part, p] = random_coin_flip_risk(space, rng, opt.max_blocks);
    if (opt.null_chance > 0.0) p = with_nulls(part, p, rng, opt.null_chance);
    Capacity nu = opt.supermodular ? random_supermodular_capacity(part, p, rng)
                                   : random_risk_conforming_capacity(part, p, rng);
    DistortionFunction g = random_distortion(rng, opt.distortion_shape);
    return ModelSpec::dual(std::move(g), std::move(nu), std::move(part), std::move(p));
}

} // namespace crdu
