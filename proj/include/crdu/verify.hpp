#pragma once

// Randomized verification suites, one per structural result, shared by the
// CLI `verify` command and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "crdu/space.hpp"

namespace crdu {

struct SuiteResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t passed = 0;
    std::string first_failure;
    /// Extra report lines (fixed quantities printed by the suite).
    std::vector<std::string> lines;
    bool ok() const { return trials > 0 && passed == trials; }
};

/// maxmin, main, comam, family, latt, counterexample, dv.
const std::vector<std::string>& suite_names();

/// Throws DomainError for an unknown name or trials == 0. The
/// counterexample suite is deterministic and runs once per trial.
SuiteResult run_suite(const std::string& name, std::size_t trials, std::uint64_t seed);

/// min over the probability simplex of E_mu[X] + beta * KL(mu | P), found by
/// a zooming grid search on three states. Independent of the closed form.
double dv_grid_minimum(const Act& x, double beta, const ProbabilityMeasure& p);

} // namespace crdu
