#pragma once

// The core {mu : mu(A) >= nu(A) for all A, mu(Omega) = 1}, its vertices, and
// the maxmin aggregation over it.

#include <cstddef>
#include <vector>

#include "crdu/capacity.hpp"
#include "crdu/distortion.hpp"
#include "crdu/space.hpp"

namespace crdu {

/// Largest space accepted by vertex enumeration.
inline constexpr std::size_t kCoreMaxStates = 8;
/// Slack of core_contains.
inline constexpr double kCoreSlack = 1e-10;
/// Max-norm distance under which two vertices are merged, and the tolerance of
/// exactness checks.
inline constexpr double kVertexTolerance = 1e-9;

/// One inequality coef . mu >= rhs.
struct Halfspace {
    std::vector<double> coef;
    double rhs;
};

class CorePolytope {
public:
    explicit CorePolytope(Capacity nu);

    const Capacity& capacity() const noexcept { return nu_; }
    /// mu(A) >= nu(A) for every proper nonempty A, in mask order. The
    /// simplex constraints (mu >= 0, sum = 1) are implicit.
    std::vector<Halfspace> constraints() const;
    /// Proper nonempty events with a constraint, in the same order.
    std::vector<Mask> constrained_events() const;

    bool contains(const ProbabilityMeasure& mu) const;
    /// Sorted lexicographically; empty iff the core is empty. Throws
    /// SpaceTooLarge above kCoreMaxStates.
    std::vector<ProbabilityMeasure> vertices() const;

private:
    Capacity nu_;
};

/// Vertices of {mu in simplex : every halfspace holds}, by double
/// description. Sorted lexicographically, merged within kVertexTolerance.
std::vector<std::vector<double>> enumerate_simplex_vertices(std::size_t n, const std::vector<Halfspace>& rows);

bool core_contains(const Capacity& nu, const ProbabilityMeasure& mu);
/// Witness {A} of the first violated inequality.
Check core_membership(const Capacity& nu, const ProbabilityMeasure& mu);

std::vector<ProbabilityMeasure> core_vertices(const Capacity& nu);

/// mu(perm[i]) = nu(perm[0..i]) - nu(perm[0..i-1]). perm must be a
/// permutation of the states. Monotonicity of nu makes this a probability.
ProbabilityMeasure marginal_vector(const Capacity& nu, const std::vector<std::size_t>& perm);

bool is_balanced(const Capacity& nu);
/// min over the core of mu(A) equals nu(A) for every A; witness {A}. An
/// empty core is reported as not exact.
Check exactness(const Capacity& nu);
bool is_exact(const Capacity& nu);

struct RobustValue {
    double value;
    /// True when value is the exact core minimum: nu supermodular, or g
    /// affine so the objective is linear in mu. Otherwise an upper bound.
    bool exact;
    std::vector<double> minimizer;
    std::size_t candidates;
};

/// Choquet integral of the utility vector ux against g o mu.
double distorted_expectation(std::span<const double> ux, const DistortionFunction& g, const ProbabilityMeasure& mu);

/// min over core vertices (plus the marginal vector along X's descending
/// order when it lies in the core) of the Choquet integral of u(X) against
/// g o mu. Throws DomainError on an empty core.
RobustValue robust_value(const UtilityFunction& u, const DistortionFunction& g, const Capacity& nu, const Act& x);

/// Is there a core element agreeing with nu on every event of the chain?
/// Throws DomainError unless the chain is nested.
bool chain_attainable(const Capacity& nu, const std::vector<Mask>& chain);

} // namespace crdu
