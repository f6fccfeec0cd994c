#pragma once

#include <cstddef>
#include <vector>

#include "crdu/capacity.hpp"
#include "crdu/space.hpp"

namespace crdu {

/// State indices sorted by payoff, largest first; ties keep index order.
std::vector<std::size_t> descending_order(const Act& x);

/// One level of the sorted-sum: a distinct payoff v, the level set
/// A = {X >= v} and its weight nu(A) - nu(previous level set).
struct ChoquetTerm {
    double payoff;
    Mask level_set;
    double weight;
};

/// One term per distinct payoff, largest first; tied states share a term.
std::vector<ChoquetTerm> choquet_decomposition(const Act& x, const Capacity& nu);

/// Sorted-sum Choquet integral.
double choquet(const Act& x, const Capacity& nu);

/// Step integration of the survival function x -> nu(X > x) on [min X, max X]
/// with `grid` midpoint cells, plus the exact tails. Independent of the
/// sorted-sum path; error is at most (max X - min X) / grid. grid >= 1e4.
double choquet_riemann_oracle(const Act& x, const Capacity& nu, std::size_t grid);

/// Absolute tolerance of comonotone_additivity_check.
inline constexpr double kComonotoneTolerance = 1e-9;

/// |C(X+Y) - C(X) - C(Y)| <= 1e-9. Throws DomainError if X and Y are not
/// comonotonic.
bool comonotone_additivity_check(const Act& x, const Act& y, const Capacity& nu);

} // namespace crdu
