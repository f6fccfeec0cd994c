#pragma once

// Seeded random generators for measures, capacities, distortions, utilities,
// acts and whole models. Every generator is deterministic in the engine state.

#include <cstddef>
#include <random>
#include <vector>

#include "crdu/capacity.hpp"
#include "crdu/distortion.hpp"
#include "crdu/models.hpp"
#include "crdu/space.hpp"

namespace crdu {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Flat Dirichlet weights; each state is independently made null with
/// probability null_chance (at least one state keeps mass).
ProbabilityMeasure random_measure(const SpacePtr& space, Rng& rng, double null_chance = 0.0);

/// Each state drawn into one of up to max_blocks blocks.
RiskPartition random_partition(const SpacePtr& space, Rng& rng, std::size_t max_blocks);

/// Monotone capacity from the running maximum of uniform draws, scaled so
/// nu(Omega) = 1.
Capacity random_capacity(const SpacePtr& space, Rng& rng);

/// Risk-conforming and P-consistent capacity: a random capacity xi that
/// only sees A n supp(P), clamped between L(A) = P(blocks b with
/// P(b \ A) = 0) and U(A) = P(blocks b with P(b n A) > 0).
Capacity random_risk_conforming_capacity(const RiskPartition& part, const ProbabilityMeasure& p, Rng& rng);

/// Supermodular, risk-conforming and P-consistent capacity
/// nu(A) = sum_b P(b) phi_b(A n b), where each phi_b is a convex
/// combination of convex distortions of random measures on the support of
/// block b and of unanimity games on subsets of that support.
Capacity random_supermodular_capacity(const RiskPartition& part, const ProbabilityMeasure& p, Rng& rng);

/// Supermodular capacity with no risk constraint (trivial partition, full
/// support). The submodular counterpart is its dual.
Capacity random_supermodular_capacity(const SpacePtr& space, Rng& rng);

enum class Shape { Any, Convex, Concave };

/// Strictly increasing distortion: a power with exponent in [0.3, 3] or a
/// piecewise-linear curve with positive slopes, shaped as requested.
DistortionFunction random_distortion(Rng& rng, Shape shape = Shape::Any);

/// Strictly increasing normalized utility on a domain containing
/// [lo, hi] and [0, 1]. Power kinds are used only when lo >= 0.
UtilityFunction random_utility(Rng& rng, double lo, double hi, Shape shape = Shape::Any);

Act random_act(const SpacePtr& space, Rng& rng, double lo, double hi);
/// Constant on each block of part.
Act random_measurable_act(const RiskPartition& part, Rng& rng, double lo, double hi);
/// Acts nondecreasing along one shared random ordering of the states, so
/// every pair is comonotonic.
std::vector<Act> random_comonotone_acts(const SpacePtr& space, Rng& rng, std::size_t count, double lo, double hi);

struct ModelOptions {
    std::size_t states = 4;
    std::size_t max_blocks = 2;
    double null_chance = 0.0;
    bool supermodular = false;
    Shape utility_shape = Shape::Any;
    Shape distortion_shape = Shape::Any;
    double payoff_lo = -5.0;
    double payoff_hi = 5.0;
};

/// CRDU model drawn from the generators above.
ModelSpec random_crdu_model(Rng& rng, const ModelOptions& opt);
/// Dual model (linear utility) drawn from the same generators.
ModelSpec random_dual_model(Rng& rng, const ModelOptions& opt);

/// Partition of `states` states into blocks so that some union of blocks
/// has probability exactly 1/2 under the returned measure.
std::pair<RiskPartition, ProbabilityMeasure> random_coin_flip_risk(const SpacePtr& space, Rng& rng,
                                                                   std::size_t max_blocks);

} // namespace crdu
