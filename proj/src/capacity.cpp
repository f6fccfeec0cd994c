#include "crdu/capacity.hpp"

#include <cmath>
#include <sstream>

namespace crdu {

namespace {

std::string event_text(const StateSpace& space, Mask m) { return "{" + mask_key(space, m) + "}"; }

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

Capacity::Capacity(SpacePtr space, std::vector<double> values) : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw InvariantViolation("capacity without a state space");
    const std::size_t count = space_->event_count();
    if (values_.size() != count)
        throw InvariantViolation("capacity table has " + std::to_string(values_.size()) + " entries, expected " +
                                 std::to_string(count));
    for (double v : values_)
        if (!std::isfinite(v)) throw InvariantViolation("capacity value not finite");
    if (std::abs(values_[0]) > kEventTolerance)
        throw InvariantViolation("capacity not grounded: nu(empty) = " + num(values_[0]));
    const Mask full = space_->full_mask();
    if (std::abs(values_[full] - 1.0) > kEventTolerance)
        throw InvariantViolation("capacity not normalized: nu(full) = " + num(values_[full]));
    values_[0] = 0.0;
    values_[full] = 1.0;
    // Monotonicity reduces to single-state extensions.
    for (Mask a = 0; a <= full; ++a) {
        for (std::size_t i = 0; i < space_->size(); ++i) {
            if (mask_contains(a, i)) continue;
            Mask b = a | (Mask{1} << i);
            if (values_[a] > values_[b] + kEventTolerance)
                throw InvariantViolation("capacity not monotone: nu" + event_text(*space_, a) + " = " +
                                         num(values_[a]) + " > nu" + event_text(*space_, b) + " = " +
                                         num(values_[b]));
        }
        if (a == full) break;
    }
}

Capacity Capacity::from_measure(const ProbabilityMeasure& mu) {
    const std::size_t count = mu.space()->event_count();
    std::vector<double> v(count);
    for (std::size_t m = 0; m < count; ++m) v[m] = mu.probability(static_cast<Mask>(m));
    return Capacity(mu.space(), std::move(v));
}

Capacity Capacity::from_function(SpacePtr space, const std::function<double(Mask)>& f) {
    const std::size_t count = space->event_count();
    std::vector<double> v(count);
    for (std::size_t m = 0; m < count; ++m) v[m] = f(static_cast<Mask>(m));
    return Capacity(std::move(space), std::move(v));
}

double Capacity::operator()(const Event& e) const {
    require_same_space(space_, e.space(), "capacity evaluation");
    return values_[e.mask()];
}

Capacity Capacity::dual() const {
    const Mask full = space_->full_mask();
    return from_function(space_, [&](Mask m) { return 1.0 - values_[full & ~m]; });
}

std::string Capacity::to_string() const {
    std::ostringstream os;
    os.precision(10);
    for (std::size_t m = 0; m < values_.size(); ++m)
        os << (m ? ", " : "") << event_text(*space_, static_cast<Mask>(m)) << ": " << values_[m];
    return os.str();
}

bool Capacity::operator==(const Capacity& other) const {
    return values_ == other.values_ && same_space(space_, other.space_);
}

// ---------------------------------------------------------------- checkers

Check set_function_supermodularity(std::span<const double> t, std::size_t n, bool submodular) {
    if (n > kMaxStates) throw SpaceTooLarge(n, kMaxStates);
    if (t.size() != (std::size_t{1} << n)) throw InvariantViolation("set function table has the wrong size");
    const double sign = submodular ? -1.0 : 1.0;
    // excess >= 0 is the supermodular inequality (sign flips it for submodular).
    auto excess = [&](Mask a, Mask b) { return sign * (t[a | b] + t[a & b] - t[a] - t[b]); };
    const std::size_t count = t.size();
    if (n <= kPairwiseSupermodularLimit) {
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = a + 1; b < count; ++b) {
                Mask ma = static_cast<Mask>(a), mb = static_cast<Mask>(b);
                if (mask_subset(ma, mb) || mask_subset(mb, ma)) continue;
                if (excess(ma, mb) < -kEventTolerance) return Check::fail({ma, mb});
            }
        return Check::pass();
    }
    // Local form: nu(A+i+j) + nu(A) >= nu(A+i) + nu(A+j). The witness is the
    // genuine pair (A+i, A+j).
    for (std::size_t a = 0; a < count; ++a) {
        Mask ma = static_cast<Mask>(a);
        for (std::size_t i = 0; i < n; ++i) {
            if (mask_contains(ma, i)) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (mask_contains(ma, j)) continue;
                Mask ai = ma | (Mask{1} << i), aj = ma | (Mask{1} << j);
                if (excess(ai, aj) < -kEventTolerance) return Check::fail({ai, aj});
            }
        }
    }
    return Check::pass();
}

Check supermodularity(const Capacity& nu) { return set_function_supermodularity(nu.values(), nu.size(), false); }
Check submodularity(const Capacity& nu) { return set_function_supermodularity(nu.values(), nu.size(), true); }
bool is_supermodular(const Capacity& nu) { return supermodularity(nu).holds; }
bool is_submodular(const Capacity& nu) { return submodularity(nu).holds; }

Check additivity(const Capacity& nu) {
    const std::size_t n = nu.size();
    for (std::size_t m = 0; m < nu.values().size(); ++m) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask_contains(static_cast<Mask>(m), i)) s += nu(Mask{1} << i);
        if (std::abs(nu(static_cast<Mask>(m)) - s) > kEventTolerance)
            return Check::fail({static_cast<Mask>(m)}, "nu differs from the sum of its singletons");
    }
    return Check::pass();
}

bool is_additive(const Capacity& nu) { return additivity(nu).holds; }

Check risk_conformity(const Capacity& nu, const RiskPartition& part, const ProbabilityMeasure& p) {
    require_same_space(nu.space(), part.space(), "risk conformity");
    require_same_space(nu.space(), p.space(), "risk conformity");
    for (Mask u : part.algebra())
        if (std::abs(nu(u) - p.probability(u)) > kEventTolerance)
            return Check::fail({u}, "nu differs from P on a risky event");
    return Check::pass();
}

bool is_risk_conforming(const Capacity& nu, const RiskPartition& part, const ProbabilityMeasure& p) {
    return risk_conformity(nu, part, p).holds;
}

Check p_consistency(const Capacity& nu, const ProbabilityMeasure& p) {
    require_same_space(nu.space(), p.space(), "P-consistency");
    const Mask null = p.null_mask();
    if (null == 0) return Check::pass();
    // nu(A) = nu(A u N) for every A already forces nu(A u S) = nu(A) for S in N.
    for (std::size_t m = 0; m < nu.values().size(); ++m) {
        Mask a = static_cast<Mask>(m);
        if (std::abs(nu(a) - nu(a | null)) > kEventTolerance)
            return Check::fail({a, a | null}, "null states change the capacity");
    }
    return Check::pass();
}

bool is_P_consistent(const Capacity& nu, const ProbabilityMeasure& p) { return p_consistency(nu, p).holds; }

Check setwise_dominance(const Capacity& nu1, const Capacity& nu2) {
    require_same_space(nu1.space(), nu2.space(), "setwise dominance");
    for (std::size_t m = 0; m < nu1.values().size(); ++m)
        if (nu1(static_cast<Mask>(m)) < nu2(static_cast<Mask>(m)) - kEventTolerance)
            return Check::fail({static_cast<Mask>(m)}, "first capacity is smaller on this event");
    return Check::pass();
}

bool dominates_setwise(const Capacity& nu1, const Capacity& nu2) { return setwise_dominance(nu1, nu2).holds; }

Capacity compose(const DistortionFunction& g, const Capacity& nu) {
    return Capacity::from_function(nu.space(), [&](Mask m) { return g(nu(m)); });
}

// ---------------------------------------------------------------- counterexample

SpacePtr product_space(std::size_t g_blocks, std::size_t h_blocks) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < g_blocks; ++i)
        for (std::size_t j = 0; j < h_blocks; ++j) labels.push_back("g" + std::to_string(i) + "h" + std::to_string(j));
    return StateSpace::make(std::move(labels));
}

Counterexample construct_counterexample(std::size_t g_blocks, std::size_t h_blocks, const ProbabilityMeasure& p,
                                        const DistortionFunction& h) {
    if (g_blocks == 0 || h_blocks == 0) throw DomainError("counterexample needs at least one block per coordinate");
    if (g_blocks * h_blocks > kMaxStates) throw SpaceTooLarge(g_blocks * h_blocks, kMaxStates);
    if (p.size() != g_blocks * h_blocks)
        throw DomainError("reference measure must have " + std::to_string(g_blocks * h_blocks) + " states");
    if (!h.is_strictly_concave()) throw DomainError("h is not strictly concave");
    if (!h.is_strictly_increasing()) throw DomainError("h is not strictly increasing");
    const SpacePtr& space = p.space();
    auto state = [&](std::size_t i, std::size_t j) { return i * h_blocks + j; };

    std::vector<Mask> g_part(g_blocks, 0), h_part(h_blocks, 0);
    for (std::size_t i = 0; i < g_blocks; ++i)
        for (std::size_t j = 0; j < h_blocks; ++j) {
            g_part[i] |= Mask{1} << state(i, j);
            h_part[j] |= Mask{1} << state(i, j);
        }
    for (std::size_t i = 0; i < g_blocks; ++i)
        for (std::size_t j = 0; j < h_blocks; ++j) {
            double joint = p.weight(state(i, j));
            double prod = p.probability(g_part[i]) * p.probability(h_part[j]);
            if (std::abs(joint - prod) > kEventTolerance)
                throw DomainError("coordinates are not independent under P at state " + space->label(state(i, j)));
        }

    DistortionFunction g = h.inverse_function();
    std::vector<double> hp(h_blocks);
    for (std::size_t j = 0; j < h_blocks; ++j) hp[j] = p.probability(h_part[j]);

    Capacity nu_tilde = Capacity::from_function(space, [&](Mask a) {
        double s = 0.0;
        for (std::size_t j = 0; j < h_blocks; ++j) {
            if (hp[j] == 0.0) continue;
            double cond = std::min(1.0, p.probability(a & h_part[j]) / hp[j]);
            s += hp[j] * g(cond);
        }
        return std::min(s, 1.0);
    });
    Capacity nu = compose(h, nu_tilde);
    return Counterexample{std::move(nu), std::move(nu_tilde), RiskPartition(space, std::move(g_part)),
                          RiskPartition(space, std::move(h_part)), h, std::move(g)};
}

} // namespace crdu
