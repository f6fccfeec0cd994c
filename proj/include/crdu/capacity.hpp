#pragma once

// Capacities on 2^Omega stored as full bitmask-indexed tables, the structural
// checkers that act on them, and the product-space construction of a
// risk-conforming capacity that is not balanced.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "crdu/distortion.hpp"
#include "crdu/space.hpp"

namespace crdu {

/// Slack used by every event-level comparison in this module.
inline constexpr double kEventTolerance = 1e-12;

/// Exhaustive pair checks are used up to this size; above it supermodularity
/// is decided through the equivalent local (two-point) condition.
inline constexpr std::size_t kPairwiseSupermodularLimit = 12;

class Capacity {
public:
    /// values[m] is the capacity of the event with mask m. Throws
    /// InvariantViolation naming the failed constraint: "capacity not
    /// grounded", "capacity not normalized" or "capacity not monotone".
    /// The endpoints are snapped to exactly 0 and 1 once validated.
    Capacity(SpacePtr space, std::vector<double> values);

    static Capacity from_measure(const ProbabilityMeasure& mu);
    static Capacity from_function(SpacePtr space, const std::function<double(Mask)>& f);

    const SpacePtr& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return space_->size(); }
    double operator()(Mask m) const { return values_[m]; }
    double operator()(const Event& e) const;
    std::span<const double> values() const noexcept { return values_; }

    /// The conjugate capacity A -> 1 - nu(A^c).
    Capacity dual() const;

    std::string to_string() const;
    bool operator==(const Capacity& other) const;

private:
    SpacePtr space_;
    std::vector<double> values_;
};

/// Outcome of a checker. On failure, witness holds the offending event(s).
struct Check {
    bool holds = true;
    std::vector<Mask> witness;
    std::string detail;

    explicit operator bool() const noexcept { return holds; }
    static Check pass() { return {}; }
    static Check fail(std::vector<Mask> w, std::string d = {}) { return {false, std::move(w), std::move(d)}; }
};

/// nu(A) + nu(B) <= nu(A u B) + nu(A n B) for all pairs; witness {A, B}.
/// Throws SpaceTooLarge above kMaxStates.
Check supermodularity(const Capacity& nu);
Check submodularity(const Capacity& nu);
bool is_supermodular(const Capacity& nu);
bool is_submodular(const Capacity& nu);

/// Same test for an arbitrary set function given as a 2^n table (no
/// normalization or monotonicity required).
Check set_function_supermodularity(std::span<const double> table, std::size_t n, bool submodular = false);

/// nu(A) equals the sum of its singletons for every A; witness {A}.
Check additivity(const Capacity& nu);
bool is_additive(const Capacity& nu);

/// nu agrees with P on every union of blocks; witness {U}.
Check risk_conformity(const Capacity& nu, const RiskPartition& part, const ProbabilityMeasure& p);
bool is_risk_conforming(const Capacity& nu, const RiskPartition& part, const ProbabilityMeasure& p);

/// nu(A) = nu(A u S) for every A and every P-null S; witness {A, A u S}.
Check p_consistency(const Capacity& nu, const ProbabilityMeasure& p);
bool is_P_consistent(const Capacity& nu, const ProbabilityMeasure& p);

/// nu1(A) >= nu2(A) for all A; witness {A}.
Check setwise_dominance(const Capacity& nu1, const Capacity& nu2);
bool dominates_setwise(const Capacity& nu1, const Capacity& nu2);

/// A -> g(nu(A)).
Capacity compose(const DistortionFunction& g, const Capacity& nu);

/// Output of construct_counterexample. State i * h_blocks + j carries the
/// i-th G coordinate and the j-th H coordinate.
struct Counterexample {
    Capacity nu;        // h o nu_tilde
    Capacity nu_tilde;  // A -> sum_j P(H_j) g(P(A | H_j))
    RiskPartition g_partition;
    RiskPartition h_partition;
    DistortionFunction h;
    DistortionFunction g;  // inverse of h
};

/// Labels "g<i>h<j>" in the layout described above.
SpacePtr product_space(std::size_t g_blocks, std::size_t h_blocks);

/// Builds nu = h o nu_tilde on a product space. P must have
/// g_blocks * h_blocks states laid out as above and make the two coordinates
/// independent within 1e-12; h must be strictly concave.
Counterexample construct_counterexample(std::size_t g_blocks, std::size_t h_blocks, const ProbabilityMeasure& p,
                                        const DistortionFunction& h);

} // namespace crdu
