#pragma once

// Preference evaluators built on the Choquet integral, together with the
// derived quantities (certainty equivalents, matching probabilities,
// subjective mixtures, distortion families) and the attitude and axiom
// checkers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crdu/capacity.hpp"
#include "crdu/choquet.hpp"
#include "crdu/core.hpp"
#include "crdu/distortion.hpp"
#include "crdu/space.hpp"

namespace crdu {

/// Band inside which two values count as indifferent.
inline constexpr double kIndifference = 1e-10;

class ModelSpec {
public:
    enum class Kind { CRDU, CEU, RDU, Dual, MEU, Entropic };

    /// Requires g strictly increasing, u normalized (u(0)=0, u(1)=1) and nu
    /// risk conforming with respect to (part, p).
    static ModelSpec crdu(UtilityFunction u, DistortionFunction g, Capacity nu, RiskPartition part,
                          ProbabilityMeasure p);
    /// CRDU with g the identity.
    static ModelSpec ceu(UtilityFunction u, Capacity nu, RiskPartition part, ProbabilityMeasure p);
    static ModelSpec rdu(UtilityFunction u, DistortionFunction g, ProbabilityMeasure p);
    /// CRDU with linear utility.
    static ModelSpec dual(DistortionFunction g, Capacity nu, RiskPartition part, ProbabilityMeasure p);
    /// When part and p are given, every prior must agree with p on the risk
    /// algebra.
    static ModelSpec meu(UtilityFunction u, std::vector<ProbabilityMeasure> priors,
                         std::optional<RiskPartition> part = std::nullopt,
                         std::optional<ProbabilityMeasure> p = std::nullopt);
    /// -E_P exp(-X / beta).
    static ModelSpec entropic(double beta, ProbabilityMeasure p);

    Kind kind() const noexcept { return kind_; }
    const SpacePtr& space() const noexcept { return space_; }
    /// True for CRDU, CEU and Dual: the kinds with a (u, g, nu) triple.
    bool has_capacity() const noexcept { return nu_.has_value(); }

    /// The vNM utility. Dual reports the identity and Entropic the
    /// exponential utility -exp(-x/beta).
    const UtilityFunction& utility() const noexcept { return u_; }
    /// Identity for CEU, MEU and Entropic.
    const DistortionFunction& distortion() const noexcept { return g_; }
    /// Throws DomainError when the kind has no capacity.
    const Capacity& capacity() const;
    /// g o nu (or g o P for RDU). Throws DomainError for MEU and Entropic.
    const Capacity& weights() const;
    /// Throws DomainError when absent (MEU without a reference).
    const ProbabilityMeasure& reference() const;
    bool has_reference() const noexcept { return p_.has_value(); }
    /// Trivial partition when none was supplied; the finest one for RDU and
    /// Entropic, which are probabilistically sophisticated.
    const RiskPartition& partition() const noexcept { return *part_; }
    const std::vector<ProbabilityMeasure>& priors() const noexcept { return priors_; }
    double beta() const noexcept { return beta_; }

    std::string kind_name() const;

private:
    ModelSpec(Kind k, SpacePtr space);

    Kind kind_;
    SpacePtr space_;
    UtilityFunction u_ = UtilityFunction::identity();
    DistortionFunction g_ = DistortionFunction::identity();
    std::optional<Capacity> nu_;
    std::optional<Capacity> weights_;
    std::optional<RiskPartition> part_;
    std::optional<ProbabilityMeasure> p_;
    std::vector<ProbabilityMeasure> priors_;
    double beta_ = 1.0;
};

std::string kind_name(ModelSpec::Kind k);
/// Case-insensitive inverse of kind_name. Throws DomainError.
ModelSpec::Kind parse_kind(const std::string& name);

// ---------------------------------------------------------------- evaluation

/// CRDU: C(u(X), g o nu); CEU: C(u(X), nu); RDU: C(u(X), g o P);
/// Dual: C(X, g o nu); MEU: min over priors of E u(X); Entropic:
/// -E_P exp(-X/beta). Throws DomainError when a payoff leaves u's domain.
double value(const ModelSpec& m, const Act& x);

/// u^{-1}(value); the value itself for Dual; -beta ln(-value) for Entropic.
double certainty_equivalent(const ModelSpec& m, const Act& x);

enum class Preference { Better, Worse, Indifferent };
std::string to_string(Preference p);
/// Sign of value(X) - value(Y) outside the kIndifference band.
Preference prefer(const ModelSpec& m, const Act& x, const Act& y);

/// g^{-1}((value(1_A) - u(0)) / (u(1) - u(0))); equals nu(A) for the
/// capacity kinds. Throws DomainError if the model has no capacity.
double matching_probability(const ModelSpec& m, const Event& a);

/// u^{-1}((u(x) + u(y)) / 2) with the model's utility.
double subjective_mixture(const ModelSpec& m, double x, double y);

/// Independent route to the subjective mixture: bisection for the z in
/// [y, x] with value(c_{xRz} R c_{zRy}) = value(xRy), where certainty
/// equivalents are themselves found by bisection on constant acts.
/// Requires g(nu(R)) in (0,1); throws DomainError otherwise.
double subjective_mixture_fixed_point_oracle(const ModelSpec& m, double x, double y, const Event& r);

/// State-wise subjective mixture; only the weight 1/2 exists.
Act act_mixture(const ModelSpec& m, const Act& x, const Act& y);

/// Certainty equivalent found by bisection on constant acts, never
/// through u^{-1}.
double certainty_equivalent_by_bisection(const ModelSpec& m, const Act& x);

// ---------------------------------------------------------------- distortion families

/// g_X restricted to D(X) = {P(X > x) : x real}, levels ascending.
struct DistortionFamilyEntry {
    Act act;
    std::vector<double> levels;
    std::vector<double> values;

    /// g_X(alpha) for alpha in D(X) (matched within 1e-12); nullopt otherwise.
    std::optional<double> at(double alpha) const;
};

/// g_X(P(X > x)) = g(nu(X > x)). Throws DomainError if nu is not
/// P-consistent or the model has no capacity.
DistortionFamilyEntry derive_distortion_family(const ModelSpec& m, const Act& x);

/// sum_j u(v_j) [g_X(P(X >= v_j)) - g_X(P(X > v_j))] over the distinct
/// payoffs v_j of X.
double family_representation_value(const ModelSpec& m, const Act& x);

/// Property (a): g_{1_A} <= g_{1_B} on shared levels for every A within B.
/// Witness {A, B}.
Check family_property_a(const ModelSpec& m);
/// Property (c) for one comonotone pair: g_X = g_Y on D(X) n D(Y) within
/// 1e-12. Throws DomainError if X and Y are not comonotonic.
Check family_property_c(const ModelSpec& m, const Act& x, const Act& y);
/// Property (c) for X against every indicator comonotone with X (the
/// upper sets of X's order). Witness {A}.
Check family_property_c_indicators(const ModelSpec& m, const Act& x);
/// g_X <= g on D(X).
bool family_entry_ambiguity_averse(const ModelSpec& m, const DistortionFamilyEntry& e);

// ---------------------------------------------------------------- attitudes

struct Flag {
    bool holds = false;
    std::string witness;
};

struct AttitudeReport {
    Flag an;       // nu additive
    Flag aa;       // nu balanced
    Flag raa;      // P in the core of nu
    Flag ds;       // u concave and g o nu supermodular
    Flag sra;      // u concave and g convex
    Flag nsc;      // nu P-consistent
    Flag family;   // the distortion family is ambiguity averse (same as raa)
};

/// Requires a capacity kind; core-based flags need at most kCoreMaxStates
/// states (SpaceTooLarge otherwise).
AttitudeReport attitude_report(const ModelSpec& m);

struct ComparativeResult {
    bool holds = false;        // the setwise comparison nu1 >= nu2
    bool behavioral = false;   // R >=_1 A implies R >=_2 A, brute force
    std::string witness;
};

/// Is m2 more ambiguity averse than m1? Decided setwise; the behavioral
/// definition over binary bets is brute-forced alongside. On a finite risk
/// algebra the behavioral check can pass while the setwise one fails, since
/// no risky event may sit between nu2(A) and nu1(A).
ComparativeResult more_ambiguity_averse(const ModelSpec& m1, const ModelSpec& m2);

/// Same utility and distortion (compared on a grid) and m2 more
/// ambiguity averse than m1.
ComparativeResult comparative_full(const ModelSpec& m1, const ModelSpec& m2);

struct EpCheck {
    std::size_t pairs = 0;
    std::size_t passed = 0;
    std::optional<Act> witness_x;  // risky act
    std::optional<Act> witness_y;
    bool holds() const { return passed == pairs; }
};

/// Samples (X risky, Y arbitrary) pairs, half of them pushed to near
/// indifference under m1, and tests X >=_1 Y => X >=_2 Y together with the
/// strict version.
EpCheck comparative_sampled_check(const ModelSpec& m1, const ModelSpec& m2, std::size_t pairs, std::uint64_t seed);

// ---------------------------------------------------------------- axiom audit

/// Tolerance for indifference between numerically constructed acts.
inline constexpr double kAuditTolerance = 1e-9;

struct AxiomResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t passed = 0;
    bool skipped = false;
    std::string note;
    std::string witness;
    bool ok() const { return skipped || passed == trials; }
};

struct AuditReport {
    std::vector<AxiomResult> axioms;
    std::vector<std::string> notes;
    const AxiomResult* find(const std::string& name) const;
};

/// Samples acts and checks M, RC, SRM, RS, SCI, CI and FSD under P at the
/// representation level. Deterministic given the seed.
AuditReport axiom_audit(const ModelSpec& m, std::size_t n_samples, std::uint64_t seed);

/// A union of risk blocks with P = 1/2 (within 1e-12), if any.
std::optional<Mask> coin_flip_event(const RiskPartition& part, const ProbabilityMeasure& p);

} // namespace crdu
