#include "crdu/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace crdu {

namespace {

void require_strict(const DistortionFunction& g) {
    if (!g.is_strictly_increasing()) throw InvariantViolation("distortion must be strictly increasing");
}

void require_normalized(const UtilityFunction& u) {
    if (!u.is_normalized())
        throw InvariantViolation("utility not normalized: need u(0) = 0 and u(1) = 1 (use normalized())");
}

void require_conforming(const Capacity& nu, const RiskPartition& part, const ProbabilityMeasure& p) {
    require_same_space(nu.space(), part.space(), "model");
    require_same_space(nu.space(), p.space(), "model");
    Check c = risk_conformity(nu, part, p);
    if (!c) throw InvariantViolation("capacity not risk conforming on {" + mask_key(*nu.space(), c.witness[0]) + "}");
}

} // namespace

ModelSpec::ModelSpec(Kind k, SpacePtr space) : kind_(k), space_(std::move(space)) {}

ModelSpec ModelSpec::crdu(UtilityFunction u, DistortionFunction g, Capacity nu, RiskPartition part,
                          ProbabilityMeasure p) {
    require_strict(g);
    require_normalized(u);
    require_conforming(nu, part, p);
    ModelSpec m(Kind::CRDU, nu.space());
    m.u_ = std::move(u);
    m.g_ = std::move(g);
    m.weights_ = compose(m.g_, nu);
    m.nu_ = std::move(nu);
    m.part_ = std::move(part);
    m.p_ = std::move(p);
    return m;
}

ModelSpec ModelSpec::ceu(UtilityFunction u, Capacity nu, RiskPartition part, ProbabilityMeasure p) {
    require_normalized(u);
    require_conforming(nu, part, p);
    ModelSpec m(Kind::CEU, nu.space());
    m.u_ = std::move(u);
    m.weights_ = nu;
    m.nu_ = std::move(nu);
    m.part_ = std::move(part);
    m.p_ = std::move(p);
    return m;
}

ModelSpec ModelSpec::rdu(UtilityFunction u, DistortionFunction g, ProbabilityMeasure p) {
    require_strict(g);
    ModelSpec m(Kind::RDU, p.space());
    m.u_ = std::move(u);
    m.g_ = std::move(g);
    m.weights_ = compose(m.g_, Capacity::from_measure(p));
    m.part_ = RiskPartition::finest(p.space());
    m.p_ = std::move(p);
    return m;
}

ModelSpec ModelSpec::dual(DistortionFunction g, Capacity nu, RiskPartition part, ProbabilityMeasure p) {
    require_strict(g);
    require_conforming(nu, part, p);
    ModelSpec m(Kind::Dual, nu.space());
    m.g_ = std::move(g);
    m.weights_ = compose(m.g_, nu);
    m.nu_ = std::move(nu);
    m.part_ = std::move(part);
    m.p_ = std::move(p);
    return m;
}

ModelSpec ModelSpec::meu(UtilityFunction u, std::vector<ProbabilityMeasure> priors, std::optional<RiskPartition> part,
                         std::optional<ProbabilityMeasure> p) {
    if (priors.empty()) throw InvariantViolation("MEU needs at least one prior");
    const SpacePtr space = priors.front().space();
    for (const auto& mu : priors) require_same_space(space, mu.space(), "MEU priors");
    if (part.has_value() != p.has_value())
        throw InvariantViolation("MEU risk partition and reference measure must be given together");
    if (part) {
        require_same_space(space, part->space(), "MEU partition");
        require_same_space(space, p->space(), "MEU reference");
        for (std::size_t k = 0; k < priors.size(); ++k)
            for (Mask r : part->algebra())
                if (std::abs(priors[k].probability(r) - p->probability(r)) > kEventTolerance)
                    throw InvariantViolation("prior " + std::to_string(k) + " not risk conforming on {" +
                                             mask_key(*space, r) + "}");
    }
    ModelSpec m(Kind::MEU, space);
    m.u_ = std::move(u);
    m.priors_ = std::move(priors);
    m.part_ = part ? std::move(*part) : RiskPartition::trivial(space);
    if (p) m.p_ = std::move(*p);
    return m;
}

ModelSpec ModelSpec::entropic(double beta, ProbabilityMeasure p) {
    if (!std::isfinite(beta) || beta <= 0.0) throw InvariantViolation("entropic model needs beta > 0");
    ModelSpec m(Kind::Entropic, p.space());
    m.beta_ = beta;
    m.u_ = UtilityFunction::exponential(beta);
    m.part_ = RiskPartition::finest(p.space());
    m.p_ = std::move(p);
    return m;
}

const Capacity& ModelSpec::capacity() const {
    if (!nu_) throw DomainError(kind_name() + " model has no capacity");
    return *nu_;
}

const Capacity& ModelSpec::weights() const {
    if (!weights_) throw DomainError(kind_name() + " model has no event weights");
    return *weights_;
}

const ProbabilityMeasure& ModelSpec::reference() const {
    if (!p_) throw DomainError(kind_name() + " model has no reference measure");
    return *p_;
}

std::string ModelSpec::kind_name() const { return crdu::kind_name(kind_); }

std::string kind_name(ModelSpec::Kind k) {
    switch (k) {
    case ModelSpec::Kind::CRDU: return "CRDU";
    case ModelSpec::Kind::CEU: return "CEU";
    case ModelSpec::Kind::RDU: return "RDU";
    case ModelSpec::Kind::Dual: return "Dual";
    case ModelSpec::Kind::MEU: return "MEU";
    case ModelSpec::Kind::Entropic: return "Entropic";
    }
    return "?";
}

ModelSpec::Kind parse_kind(const std::string& name) {
    std::string up;
    for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (auto k : {ModelSpec::Kind::CRDU, ModelSpec::Kind::CEU, ModelSpec::Kind::RDU, ModelSpec::Kind::Dual,
                   ModelSpec::Kind::MEU, ModelSpec::Kind::Entropic}) {
        std::string kn = kind_name(k);
        for (char& c : kn) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (kn == up) return k;
    }
    throw DomainError("unknown model kind '" + name + "'");
}

// ---------------------------------------------------------------- evaluation

double value(const ModelSpec& m, const Act& x) {
    require_same_space(m.space(), x.space(), "value");
    switch (m.kind()) {
    case ModelSpec::Kind::CRDU:
    case ModelSpec::Kind::CEU:
    case ModelSpec::Kind::RDU: {
        const auto& u = m.utility();
        return choquet(x.map([&](double v) { return u(v); }), m.weights());
    }
    case ModelSpec::Kind::Dual: return choquet(x, m.weights());
    case ModelSpec::Kind::MEU: {
        const auto& u = m.utility();
        Act ux = x.map([&](double v) { return u(v); });
        double best = std::numeric_limits<double>::infinity();
        for (const auto& mu : m.priors()) best = std::min(best, mu.expectation(ux));
        return best;
    }
    case ModelSpec::Kind::Entropic: {
        const auto& p = m.reference();
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += p.weight(i) * std::exp(-x[i] / m.beta());
        return -s;
    }
    }
    return 0.0;
}

double certainty_equivalent(const ModelSpec& m, const Act& x) { return m.utility().inverse(value(m, x)); }

std::string to_string(Preference p) {
    switch (p) {
    case Preference::Better: return "better";
    case Preference::Worse: return "worse";
    case Preference::Indifferent: return "indifferent";
    }
    return "?";
}

Preference prefer(const ModelSpec& m, const Act& x, const Act& y) {
    double d = value(m, x) - value(m, y);
    if (d > kIndifference) return Preference::Better;
    if (d < -kIndifference) return Preference::Worse;
    return Preference::Indifferent;
}

double matching_probability(const ModelSpec& m, const Event& a) {
    require_same_space(m.space(), a.space(), "matching_probability");
    if (m.kind() == ModelSpec::Kind::MEU || m.kind() == ModelSpec::Kind::Entropic)
        throw DomainError("matching probabilities need a capacity model");
    const auto& u = m.utility();
    if (!u.in_domain(0.0) || !u.in_domain(1.0)) throw DomainError("normalization violated: [0,1] outside the utility domain");
    double u0 = u(0.0), u1 = u(1.0);
    double ratio = (value(m, Act::indicator(a)) - u0) / (u1 - u0);
    return m.distortion().inverse(std::clamp(ratio, 0.0, 1.0));
}

double subjective_mixture(const ModelSpec& m, double x, double y) {
    const auto& u = m.utility();
    if (x == y) {
        (void)u(x);
        return x;
    }
    return u.inverse(0.5 * (u(x) + u(y)));
}

Act act_mixture(const ModelSpec& m, const Act& x, const Act& y) {
    require_same_space(x.space(), y.space(), "act_mixture");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = subjective_mixture(m, x[i], y[i]);
    return Act(x.space(), std::move(out));
}

double certainty_equivalent_by_bisection(const ModelSpec& m, const Act& x) {
    const double target = value(m, x);
    const double lo = x.min(), hi = x.max();
    if (lo == hi) return lo;
    auto f = [&](double c) { return value(m, Act::constant(x.space(), c)); };
    return bisect_increasing(f, target, lo, hi, 1e-14 * std::max(1.0, std::abs(hi) + std::abs(lo)));
}

double subjective_mixture_fixed_point_oracle(const ModelSpec& m, double x, double y, const Event& r) {
    require_same_space(m.space(), r.space(), "subjective mixture oracle");
    if (x < y) std::swap(x, y);
    double w = value(m, Act::binary(1.0, r, 0.0));
    const auto& u = m.utility();
    if (u.in_domain(0.0) && u.in_domain(1.0)) w = (w - u(0.0)) / (u(1.0) - u(0.0));
    if (!(w > kEventTolerance && w < 1.0 - kEventTolerance)) throw DomainError("event R is degenerate: g(nu(R)) not in (0,1)");
    if (x == y) return x;
    const double target = value(m, Act::binary(x, r, y));
    auto f = [&](double z) {
        double c1 = certainty_equivalent_by_bisection(m, Act::binary(x, r, z));
        double c2 = certainty_equivalent_by_bisection(m, Act::binary(z, r, y));
        return value(m, Act::binary(c1, r, c2));
    };
    return bisect_increasing(f, target, y, x, 1e-13 * std::max(1.0, std::abs(x) + std::abs(y)));
}

} // namespace crdu
