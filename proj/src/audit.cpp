#include <algorithm>
#include <array>
#include <cmath>

#include "crdu/models.hpp"
#include "crdu/sampling.hpp"

namespace crdu {

const AxiomResult* AuditReport::find(const std::string& name) const {
    for (const auto& a : axioms)
        if (a.name == name) return &a;
    return nullptr;
}

std::optional<Mask> coin_flip_event(const RiskPartition& part, const ProbabilityMeasure& p) {
    require_same_space(part.space(), p.space(), "coin_flip_event");
    for (Mask r : part.algebra())
        if (std::abs(p.probability(r) - 0.5) <= kEventTolerance) return r;
    return std::nullopt;
}

namespace {

struct Audit {
    const ModelSpec& m;
    Rng rng;
    double lo, hi;
    std::optional<Mask> coin;

    double v(const Act& x) const { return value(m, x); }

    void record(AxiomResult& r, bool ok, const std::string& witness) const {
        ++r.trials;
        if (ok)
            ++r.passed;
        else if (r.witness.empty())
            r.witness = witness;
    }

    // A block-measurable act; with a coin-flip event present, half of the
    // draws are constant on it and on its complement.
    Act measurable_act(const RiskPartition& part, double a, double b) {
        if (coin && uniform(rng, 0.0, 1.0) < 0.5) {
            const double x = uniform(rng, a, b), y = uniform(rng, a, b);
            std::vector<double> out(part.space()->size());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask_contains(*coin, i) ? x : y;
            return Act(part.space(), std::move(out));
        }
        return random_measurable_act(part, rng, a, b);
    }

    // Same law under P: block values permuted among blocks of equal mass,
    // the coin-flip halves swapped when the act is constant on each, and
    // null blocks redrawn.
    Act same_law_variant(const Act& x, const RiskPartition& part, const ProbabilityMeasure& p) {
        const auto& blocks = part.blocks();
        const std::size_t n = x.size();
        auto first = [](Mask b) {
            std::size_t i = 0;
            while (!mask_contains(b, i)) ++i;
            return i;
        };
        std::vector<double> bval(blocks.size()), bprob(blocks.size());
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            bval[k] = x[first(blocks[k])];
            bprob[k] = p.probability(blocks[k]);
        }
        // Random transpositions inside equal-mass classes.
        for (std::size_t t = 0; t < blocks.size(); ++t) {
            std::size_t i = uniform_index(rng, blocks.size()), j = uniform_index(rng, blocks.size());
            if (std::abs(bprob[i] - bprob[j]) <= kEventTolerance) std::swap(bval[i], bval[j]);
        }
        std::vector<double> out(n);
        for (std::size_t k = 0; k < blocks.size(); ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (mask_contains(blocks[k], i)) out[i] = bprob[k] <= 0.0 ? uniform(rng, lo, hi) : bval[k];
        if (coin && uniform(rng, 0.0, 1.0) < 0.5) {
            const Mask c = *coin, rest = part.space()->full_mask() & ~c;
            const Mask cs = c & p.support_mask(), rs = rest & p.support_mask();
            std::optional<double> a, b;
            bool flat = true;
            for (std::size_t i = 0; i < n && flat; ++i) {
                auto& slot = mask_contains(cs, i) ? a : b;
                if (!mask_contains(cs | rs, i)) continue;
                if (!slot) slot = out[i];
                flat = *slot == out[i];
            }
            if (flat && a && b)
                for (std::size_t i = 0; i < n; ++i) {
                    if (mask_contains(cs, i)) out[i] = *b;
                    if (mask_contains(rs, i)) out[i] = *a;
                }
        }
        return Act(x.space(), std::move(out));
    }

    AxiomResult monotonicity(std::size_t trials) {
        AxiomResult r{"M", 0, 0, false, "X >= Y statewise implies X >= Y in preference", {}};
        for (std::size_t t = 0; t < trials; ++t) {
            Act y = random_act(m.space(), rng, lo, hi);
            std::vector<double> x(y.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = uniform(rng, 0.0, 1.0) < 0.3 ? y[i] : uniform(rng, y[i], hi);
            Act xa(m.space(), std::move(x));
            record(r, v(xa) >= v(y) - kAuditTolerance, "X = " + xa.to_string() + ", Y = " + y.to_string());
        }
        return r;
    }

    AxiomResult risk_conformity(std::size_t trials) {
        AxiomResult r{"RC", 0, 0, false, "risky acts with the same law under P are indifferent", {}};
        const auto& part = m.partition();
        const auto& p = m.reference();
        for (std::size_t t = 0; t < trials; ++t) {
            Act x = measurable_act(part, lo, hi);
            Act y = same_law_variant(x, part, p);
            record(r, std::abs(v(x) - v(y)) <= kAuditTolerance, "X = " + x.to_string() + ", Y = " + y.to_string());
        }
        return r;
    }

    AxiomResult strict_risk_monotonicity(std::size_t trials) {
        AxiomResult r{"SRM", 0, 0, false, "risky X > Y P-almost surely implies X strictly preferred", {}};
        const auto& part = m.partition();
        const auto& p = m.reference();
        const double top = std::max(lo, hi - 1.0);
        for (std::size_t t = 0; t < trials; ++t) {
            Act y = random_measurable_act(part, rng, lo, top);
            std::vector<double> x(y.size());
            for (Mask b : part.blocks()) {
                const bool null = p.probability(b) <= 0.0;
                const double inc = uniform(rng, 0.01, std::min(1.0, std::max(0.01, hi - top)));
                const double nv = uniform(rng, lo, hi);
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (mask_contains(b, i)) x[i] = null ? nv : std::min(y[i] + inc, hi);
            }
            Act xa(m.space(), std::move(x));
            record(r, prefer(m, xa, y) == Preference::Better, "X = " + xa.to_string() + ", Y = " + y.to_string());
        }
        return r;
    }

    AxiomResult risk_symmetry(std::size_t trials) {
        AxiomResult r{"RS", 0, 0, false, "c(xRz) R c(z'Ry) ~ c(xRz') R c(zRy) for a coin-flip event R", {}};
        const Event ev(m.space(), *coin);
        auto ce = [&](double a, double b) { return certainty_equivalent(m, Act::binary(a, ev, b)); };
        for (std::size_t t = 0; t < trials; ++t) {
            double x = uniform(rng, lo, hi), y = uniform(rng, lo, hi);
            if (x < y) std::swap(x, y);
            const double z = uniform(rng, y, x), z2 = uniform(rng, y, x);
            const double left = v(Act::binary(ce(x, z), ev, ce(z2, y)));
            const double right = v(Act::binary(ce(x, z2), ev, ce(z, y)));
            record(r, std::abs(left - right) <= kAuditTolerance,
                   "x = " + std::to_string(x) + ", y = " + std::to_string(y) + ", z = " + std::to_string(z) +
                       ", z' = " + std::to_string(z2));
        }
        return r;
    }

    // Pairwise comonotone X, Y, Z with X ~ Y. Y is the certainty
    // equivalent of X or a comonotone act shifted to indifference.
    std::array<Act, 3> indifferent_triple() {
        auto acts = random_comonotone_acts(m.space(), rng, 3, lo, hi);
        const Act& x = acts[0];
        const double target = v(x);
        if (uniform(rng, 0.0, 1.0) < 0.5) {
            const Act& w = acts[2];
            const double c_lo = lo - w.min(), c_hi = hi - w.max();
            auto f = [&](double c) { return v(w + c); };
            if (c_lo < c_hi && f(c_lo) <= target && target <= f(c_hi))
                return {x, w + bisect_increasing(f, target, c_lo, c_hi, 1e-14), acts[1]};
        }
        return {x, Act::constant(m.space(), certainty_equivalent(m, x)), acts[1]};
    }

    AxiomResult independence(std::size_t trials, bool subjective) {
        AxiomResult r{subjective ? "SCI" : "CI", 0, 0, false,
                      subjective ? "X ~ Y implies X (+) Z ~ Y (+) Z for comonotone X, Y, Z"
                                 : "X ~ Y implies X/2 + Z/2 ~ Y/2 + Z/2 for comonotone X, Y, Z",
                      {}};
        for (std::size_t t = 0; t < trials; ++t) {
            auto [x, y, z] = indifferent_triple();
            Act xz = subjective ? act_mixture(m, x, z) : Act::mix(x, z, 0.5);
            Act yz = subjective ? act_mixture(m, y, z) : Act::mix(y, z, 0.5);
            record(r, std::abs(v(xz) - v(yz)) <= kAuditTolerance,
                   "X = " + x.to_string() + ", Y = " + y.to_string() + ", Z = " + z.to_string());
        }
        return r;
    }

    AxiomResult fsd(std::size_t trials, bool risky_only) {
        AxiomResult r{"FSD", 0, 0, false, "X first-order dominating Y under P implies X >= Y in preference", {}};
        if (risky_only) r.note += " (risky acts only: the capacity is not P-sophisticated off the risk algebra)";
        const RiskPartition part = risky_only ? m.partition() : RiskPartition::finest(m.space());
        const auto& p = m.reference();
        for (std::size_t t = 0; t < trials; ++t) {
            Act y = risky_only ? random_measurable_act(part, rng, lo, hi) : random_act(m.space(), rng, lo, hi);
            std::vector<double> x(y.size());
            for (Mask b : part.blocks()) {
                const double inc = uniform(rng, 0.0, 1.0) < 0.3 ? 0.0 : uniform(rng, 0.0, 1.0);
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (mask_contains(b, i)) x[i] = std::min(y[i] + inc, hi);
            }
            Act xa = same_law_variant(Act(m.space(), std::move(x)), part, p);
            // The redraw of null blocks keeps X >= Y in the P-law.
            if (!fsd_geq(xa, y, p)) throw InvariantViolation("audit generator broke first-order dominance");
            record(r, v(xa) >= v(y) - kAuditTolerance, "X = " + xa.to_string() + ", Y = " + y.to_string());
        }
        return r;
    }
};

AxiomResult skipped(const std::string& name, const std::string& why) {
    AxiomResult r;
    r.name = name;
    r.skipped = true;
    r.note = why;
    return r;
}

} // namespace

AuditReport axiom_audit(const ModelSpec& m, std::size_t n_samples, std::uint64_t seed) {
    const auto& u = m.utility();
    Audit a{m, Rng(seed), std::max(u.lo(), -5.0), std::min(u.hi(), 5.0), std::nullopt};
    if (!(a.lo < a.hi)) throw DomainError("utility domain too narrow to audit");
    const bool has_p = m.has_reference();
    if (has_p) a.coin = coin_flip_event(m.partition(), m.reference());

    AuditReport rep;
    rep.notes.push_back("Axiom (C) and continuity of nu have no finite-space content and are not audited.");
    rep.axioms.push_back(a.monotonicity(n_samples));
    if (has_p) {
        rep.axioms.push_back(a.risk_conformity(n_samples));
        rep.axioms.push_back(a.strict_risk_monotonicity(n_samples));
    } else {
        rep.axioms.push_back(skipped("RC", "no reference measure"));
        rep.axioms.push_back(skipped("SRM", "no reference measure"));
    }
    if (a.coin) {
        rep.axioms.push_back(a.risk_symmetry(n_samples));
        rep.axioms.push_back(a.independence(n_samples, true));
    } else {
        const std::string why = "no union of risk blocks has probability 1/2";
        rep.axioms.push_back(skipped("RS", why));
        rep.axioms.push_back(skipped("SCI", why));
        rep.notes.push_back("RS and SCI skipped: " + why + ".");
    }
    rep.axioms.push_back(a.independence(n_samples, false));
    if (has_p) {
        const bool sophisticated = m.kind() == ModelSpec::Kind::RDU || m.kind() == ModelSpec::Kind::Entropic;
        rep.axioms.push_back(a.fsd(n_samples, !sophisticated));
    } else {
        rep.axioms.push_back(skipped("FSD", "no reference measure"));
    }
    return rep;
}

} // namespace crdu
