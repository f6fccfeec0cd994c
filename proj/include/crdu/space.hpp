#pragma once

// Finite state spaces and the objects that live on them: events, acts,
// probability measures and risk partitions, together with the order
// relations used to compare acts.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crdu/error.hpp"

namespace crdu {

/// Bit i set <=> state i belongs to the event.
using Mask = std::uint32_t;

/// Largest state space accepted anywhere; capacities store 2^n values.
inline constexpr std::size_t kMaxStates = 16;

/// Tolerance on the total mass of a probability measure.
inline constexpr double kWeightTolerance = 1e-12;

class StateSpace;
using SpacePtr = std::shared_ptr<const StateSpace>;

/// An ordered list of distinct state labels. Always handled through SpacePtr.
class StateSpace {
public:
    static SpacePtr make(std::vector<std::string> labels);
    /// States named prefix0, prefix1, ...
    static SpacePtr indexed(std::size_t n, const std::string& prefix = "s");

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::optional<std::size_t> index_of(const std::string& label) const;

    Mask full_mask() const noexcept { return static_cast<Mask>((std::uint64_t{1} << size()) - 1); }
    std::size_t event_count() const noexcept { return std::size_t{1} << size(); }

    bool operator==(const StateSpace& other) const { return labels_ == other.labels_; }

private:
    explicit StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {}
    std::vector<std::string> labels_;
};

/// Spaces are equal when their labels agree; the pointers need not match.
bool same_space(const SpacePtr& a, const SpacePtr& b);
void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* context);

inline bool mask_contains(Mask m, std::size_t i) { return ((m >> i) & 1u) != 0; }
inline bool mask_subset(Mask a, Mask b) { return (a & ~b) == 0; }

/// Comma-joined labels in state order, e.g. "a,c". Empty mask gives "".
std::string mask_key(const StateSpace& space, Mask m);
/// Inverse of mask_key; labels may come in any order. Throws InvariantViolation
/// on unknown or repeated labels.
Mask parse_mask_key(const StateSpace& space, const std::string& key);

class Event {
public:
    Event(SpacePtr space, Mask members);
    static Event empty(SpacePtr space) { return Event(std::move(space), 0); }
    static Event full(SpacePtr space);
    static Event of(SpacePtr space, std::initializer_list<std::size_t> states);

    const SpacePtr& space() const noexcept { return space_; }
    Mask mask() const noexcept { return members_; }
    bool contains(std::size_t state) const { return mask_contains(members_, state); }
    std::size_t size() const;
    bool is_empty() const noexcept { return members_ == 0; }

    Event complement() const;
    bool subset_of(const Event& other) const;
    Event operator|(const Event& other) const;
    Event operator&(const Event& other) const;
    Event operator-(const Event& other) const;

    /// "{a,c}" style rendering.
    std::string to_string() const;
    /// Canonical file key, see mask_key.
    std::string key() const { return mask_key(*space_, members_); }

    bool operator==(const Event& other) const;

private:
    SpacePtr space_;
    Mask members_;
};

/// A bounded payoff for every state.
class Act {
public:
    Act(SpacePtr space, std::vector<double> payoff);
    static Act constant(SpacePtr space, double c);
    /// hi on the event, lo elsewhere (the binary act hi A lo).
    static Act binary(double hi, const Event& event, double lo);
    static Act indicator(const Event& event) { return binary(1.0, event, 0.0); }

    const SpacePtr& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return payoff_.size(); }
    double operator[](std::size_t i) const { return payoff_[i]; }
    std::span<const double> payoff() const noexcept { return payoff_; }

    double min() const;
    double max() const;
    /// Supremum norm.
    double norm() const;
    bool is_constant() const;
    /// The upper level set {X > x}.
    Mask strict_upper_set(double x) const;

    Act map(const std::function<double(double)>& f) const;
    Act operator+(const Act& other) const;
    Act operator-(const Act& other) const;
    Act operator+(double c) const;
    Act operator*(double s) const;
    /// lambda X + (1 - lambda) Y
    static Act mix(const Act& x, const Act& y, double lambda);

    std::string to_string() const;
    bool operator==(const Act& other) const;

private:
    SpacePtr space_;
    std::vector<double> payoff_;
};

class ProbabilityMeasure {
public:
    /// Throws InvariantViolation unless weights are >= 0 and sum to 1 within
    /// kWeightTolerance.
    ProbabilityMeasure(SpacePtr space, std::vector<double> weights);
    static ProbabilityMeasure uniform(SpacePtr space);
    static ProbabilityMeasure point_mass(SpacePtr space, std::size_t state);

    const SpacePtr& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double weight(std::size_t i) const { return weights_.at(i); }
    std::span<const double> weights() const noexcept { return weights_; }

    double probability(Mask m) const;
    double probability(const Event& e) const;
    /// States carrying zero weight.
    Mask null_mask() const;
    Mask support_mask() const;

    double expectation(const Act& x) const;

    bool operator==(const ProbabilityMeasure& other) const;

private:
    SpacePtr space_;
    std::vector<double> weights_;
};

/// A partition of the states; the risk algebra is generated by its blocks.
class RiskPartition {
public:
    RiskPartition(SpacePtr space, std::vector<Mask> blocks);
    /// Every state its own block (everything measurable).
    static RiskPartition finest(SpacePtr space);
    /// One block, the algebra {empty, full}.
    static RiskPartition trivial(SpacePtr space);

    const SpacePtr& space() const noexcept { return space_; }
    const std::vector<Mask>& blocks() const noexcept { return blocks_; }
    std::size_t block_of(std::size_t state) const;

    /// Every union of blocks, including the empty union.
    std::vector<Mask> algebra() const;
    /// True iff the event is a union of blocks.
    bool measurable(Mask m) const;
    bool measurable(const Event& e) const;

    /// Smallest measurable event containing m.
    Mask outer(Mask m) const;
    /// Largest measurable event contained in m.
    Mask inner(Mask m) const;

    bool operator==(const RiskPartition& other) const;

private:
    SpacePtr space_;
    std::vector<Mask> blocks_;
};

/// Law of an act: strictly increasing support with matching probabilities.
struct Distribution {
    std::vector<double> support;
    std::vector<double> prob;

    bool approx_equal(const Distribution& other, double tol = kWeightTolerance) const;
    bool operator==(const Distribution&) const = default;
};

/// True iff the act is constant on every block.
bool is_measurable(const Act& act, const RiskPartition& part);

/// Law of the act under mu; zero-probability atoms are dropped.
Distribution distribution(const Act& act, const ProbabilityMeasure& mu);

/// mu(X > x) >= mu(Y > x) for every x, checked at the merged payoffs.
bool fsd_geq(const Act& x, const Act& y, const ProbabilityMeasure& mu);

/// Increasing-concave order: E(t - X)_+ <= E(t - Y)_+ at every merged payoff t.
bool ssd_geq(const Act& x, const Act& y, const ProbabilityMeasure& mu);

/// Non-strict: mu(X >= Y) = 1. Strict: mu(X > Y) = 1.
bool as_dominates(const Act& x, const Act& y, const ProbabilityMeasure& mu, bool strict);

/// No pair of states on which X and Y move in opposite directions.
bool comonotonic(const Act& x, const Act& y);

/// Same law under mu (fsd both ways).
bool equal_in_distribution(const Act& x, const Act& y, const ProbabilityMeasure& mu);

} // namespace crdu
