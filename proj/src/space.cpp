#include "crdu/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace crdu {

SpacePtr StateSpace::make(std::vector<std::string> labels) {
    if (labels.empty()) throw InvariantViolation("state space must be nonempty");
    if (labels.size() > kMaxStates)
        throw InvariantViolation("state space has " + std::to_string(labels.size()) +
                                 " states; at most " + std::to_string(kMaxStates) + " supported");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw InvariantViolation("state labels must be nonempty");
        if (l.find(',') != std::string::npos)
            throw InvariantViolation("state label '" + l + "' contains a comma");
        if (!seen.insert(l).second) throw InvariantViolation("duplicate state label '" + l + "'");
    }
    return SpacePtr(new StateSpace(std::move(labels)));
}

SpacePtr StateSpace::indexed(std::size_t n, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return make(std::move(labels));
}

std::optional<std::size_t> StateSpace::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* context) {
    if (!same_space(a, b)) throw SpaceMismatch(context);
}

std::string mask_key(const StateSpace& space, Mask m) {
    std::string out;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!mask_contains(m, i)) continue;
        if (!out.empty()) out += ',';
        out += space.label(i);
    }
    return out;
}

Mask parse_mask_key(const StateSpace& space, const std::string& key) {
    Mask m = 0;
    if (key.empty()) return m;
    std::stringstream ss(key);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw InvariantViolation("empty label in subset key '" + key + "'");
        item = item.substr(b, e - b + 1);
        auto idx = space.index_of(item);
        if (!idx) throw InvariantViolation("unknown state '" + item + "' in subset key '" + key + "'");
        if (mask_contains(m, *idx))
            throw InvariantViolation("state '" + item + "' repeated in subset key '" + key + "'");
        m |= Mask{1} << *idx;
    }
    return m;
}

// ---------------------------------------------------------------- Event

Event::Event(SpacePtr space, Mask members) : space_(std::move(space)), members_(members) {
    if (!space_) throw InvariantViolation("event without a state space");
    if (!mask_subset(members_, space_->full_mask()))
        throw InvariantViolation("event members outside the state space");
}

Event Event::full(SpacePtr space) {
    Mask m = space->full_mask();
    return Event(std::move(space), m);
}

Event Event::of(SpacePtr space, std::initializer_list<std::size_t> states) {
    Mask m = 0;
    for (auto s : states) m |= Mask{1} << s;
    return Event(std::move(space), m);
}

std::size_t Event::size() const { return static_cast<std::size_t>(std::popcount(members_)); }

Event Event::complement() const { return Event(space_, space_->full_mask() & ~members_); }

bool Event::subset_of(const Event& other) const {
    require_same_space(space_, other.space_, "Event::subset_of");
    return mask_subset(members_, other.members_);
}

Event Event::operator|(const Event& other) const {
    require_same_space(space_, other.space_, "event union");
    return Event(space_, members_ | other.members_);
}

Event Event::operator&(const Event& other) const {
    require_same_space(space_, other.space_, "event intersection");
    return Event(space_, members_ & other.members_);
}

Event Event::operator-(const Event& other) const {
    require_same_space(space_, other.space_, "event difference");
    return Event(space_, members_ & ~other.members_);
}

std::string Event::to_string() const { return "{" + key() + "}"; }

bool Event::operator==(const Event& other) const {
    return members_ == other.members_ && same_space(space_, other.space_);
}

// ---------------------------------------------------------------- Act

Act::Act(SpacePtr space, std::vector<double> payoff) : space_(std::move(space)), payoff_(std::move(payoff)) {
    if (!space_) throw InvariantViolation("act without a state space");
    if (payoff_.size() != space_->size())
        throw InvariantViolation("act defines " + std::to_string(payoff_.size()) + " payoffs for " +
                                 std::to_string(space_->size()) + " states");
    for (double v : payoff_)
        if (!std::isfinite(v)) throw InvariantViolation("act payoff is not finite");
}

Act Act::constant(SpacePtr space, double c) {
    std::size_t n = space->size();
    return Act(std::move(space), std::vector<double>(n, c));
}

Act Act::binary(double hi, const Event& event, double lo) {
    std::vector<double> p(event.space()->size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = event.contains(i) ? hi : lo;
    return Act(event.space(), std::move(p));
}

double Act::min() const { return *std::min_element(payoff_.begin(), payoff_.end()); }
double Act::max() const { return *std::max_element(payoff_.begin(), payoff_.end()); }

double Act::norm() const {
    double m = 0.0;
    for (double v : payoff_) m = std::max(m, std::abs(v));
    return m;
}

bool Act::is_constant() const {
    return std::all_of(payoff_.begin(), payoff_.end(), [&](double v) { return v == payoff_.front(); });
}

Mask Act::strict_upper_set(double x) const {
    Mask m = 0;
    for (std::size_t i = 0; i < payoff_.size(); ++i)
        if (payoff_[i] > x) m |= Mask{1} << i;
    return m;
}

Act Act::map(const std::function<double(double)>& f) const {
    std::vector<double> out(payoff_.size());
    std::transform(payoff_.begin(), payoff_.end(), out.begin(), f);
    return Act(space_, std::move(out));
}

Act Act::operator+(const Act& other) const {
    require_same_space(space_, other.space_, "act sum");
    std::vector<double> out(payoff_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = payoff_[i] + other.payoff_[i];
    return Act(space_, std::move(out));
}

Act Act::operator-(const Act& other) const {
    require_same_space(space_, other.space_, "act difference");
    std::vector<double> out(payoff_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = payoff_[i] - other.payoff_[i];
    return Act(space_, std::move(out));
}

Act Act::operator+(double c) const {
    return map([c](double v) { return v + c; });
}

Act Act::operator*(double s) const {
    return map([s](double v) { return v * s; });
}

Act Act::mix(const Act& x, const Act& y, double lambda) {
    require_same_space(x.space_, y.space_, "act mixture");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lambda * x.payoff_[i] + (1.0 - lambda) * y.payoff_[i];
    return Act(x.space_, std::move(out));
}

std::string Act::to_string() const {
    std::ostringstream os;
    os.precision(10);
    os << '(';
    for (std::size_t i = 0; i < payoff_.size(); ++i) os << (i ? ", " : "") << payoff_[i];
    os << ')';
    return os.str();
}

bool Act::operator==(const Act& other) const {
    return payoff_ == other.payoff_ && same_space(space_, other.space_);
}

// ---------------------------------------------------------------- ProbabilityMeasure

ProbabilityMeasure::ProbabilityMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (!space_) throw InvariantViolation("measure without a state space");
    if (weights_.size() != space_->size())
        throw InvariantViolation("measure has " + std::to_string(weights_.size()) + " weights for " +
                                 std::to_string(space_->size()) + " states");
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) throw InvariantViolation("probability weights must be nonnegative");
        if (w > 1.0 + kWeightTolerance) throw InvariantViolation("probability weight exceeds 1");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightTolerance)
        throw InvariantViolation("probability weights must sum to 1 (got " + std::to_string(total) + ")");
}

ProbabilityMeasure ProbabilityMeasure::uniform(SpacePtr space) {
    std::size_t n = space->size();
    return ProbabilityMeasure(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityMeasure ProbabilityMeasure::point_mass(SpacePtr space, std::size_t state) {
    std::vector<double> w(space->size(), 0.0);
    w.at(state) = 1.0;
    return ProbabilityMeasure(std::move(space), std::move(w));
}

double ProbabilityMeasure::probability(Mask m) const {
    // Almost sure events are exactly 1, not a rounded sum.
    if (mask_subset(support_mask(), m)) return 1.0;
    double p = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (mask_contains(m, i)) p += weights_[i];
    return p;
}

double ProbabilityMeasure::probability(const Event& e) const {
    require_same_space(space_, e.space(), "ProbabilityMeasure::probability");
    return probability(e.mask());
}

Mask ProbabilityMeasure::null_mask() const {
    Mask m = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (weights_[i] == 0.0) m |= Mask{1} << i;
    return m;
}

Mask ProbabilityMeasure::support_mask() const { return space_->full_mask() & ~null_mask(); }

double ProbabilityMeasure::expectation(const Act& x) const {
    require_same_space(space_, x.space(), "ProbabilityMeasure::expectation");
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * x[i];
    return s;
}

bool ProbabilityMeasure::operator==(const ProbabilityMeasure& other) const {
    return weights_ == other.weights_ && same_space(space_, other.space_);
}

// ---------------------------------------------------------------- RiskPartition

RiskPartition::RiskPartition(SpacePtr space, std::vector<Mask> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
    if (!space_) throw InvariantViolation("partition without a state space");
    Mask seen = 0;
    for (Mask b : blocks_) {
        if (b == 0) throw InvariantViolation("risk partition has an empty block");
        if (!mask_subset(b, space_->full_mask())) throw InvariantViolation("risk partition block outside the space");
        if (b & seen) throw InvariantViolation("risk partition blocks overlap");
        seen |= b;
    }
    if (seen != space_->full_mask()) throw InvariantViolation("risk partition does not cover every state");
}

RiskPartition RiskPartition::finest(SpacePtr space) {
    std::vector<Mask> blocks;
    for (std::size_t i = 0; i < space->size(); ++i) blocks.push_back(Mask{1} << i);
    return RiskPartition(std::move(space), std::move(blocks));
}

RiskPartition RiskPartition::trivial(SpacePtr space) {
    Mask full = space->full_mask();
    return RiskPartition(std::move(space), {full});
}

std::size_t RiskPartition::block_of(std::size_t state) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        if (mask_contains(blocks_[b], state)) return b;
    throw DomainError("state index out of range");
}

std::vector<Mask> RiskPartition::algebra() const {
    std::vector<Mask> out;
    std::size_t k = blocks_.size();
    out.reserve(std::size_t{1} << k);
    for (std::size_t sel = 0; sel < (std::size_t{1} << k); ++sel) {
        Mask m = 0;
        for (std::size_t b = 0; b < k; ++b)
            if ((sel >> b) & 1u) m |= blocks_[b];
        out.push_back(m);
    }
    return out;
}

bool RiskPartition::measurable(Mask m) const {
    for (Mask b : blocks_) {
        Mask in = b & m;
        if (in != 0 && in != b) return false;
    }
    return true;
}

bool RiskPartition::measurable(const Event& e) const {
    require_same_space(space_, e.space(), "RiskPartition::measurable");
    return measurable(e.mask());
}

Mask RiskPartition::outer(Mask m) const {
    Mask out = 0;
    for (Mask b : blocks_)
        if (b & m) out |= b;
    return out;
}

Mask RiskPartition::inner(Mask m) const {
    Mask out = 0;
    for (Mask b : blocks_)
        if (mask_subset(b, m)) out |= b;
    return out;
}

bool RiskPartition::operator==(const RiskPartition& other) const {
    if (!same_space(space_, other.space_)) return false;
    auto a = blocks_, b = other.blocks_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

// ---------------------------------------------------------------- relations

bool Distribution::approx_equal(const Distribution& other, double tol) const {
    if (support != other.support || prob.size() != other.prob.size()) return false;
    for (std::size_t i = 0; i < prob.size(); ++i)
        if (std::abs(prob[i] - other.prob[i]) > tol) return false;
    return true;
}

bool is_measurable(const Act& act, const RiskPartition& part) {
    require_same_space(act.space(), part.space(), "is_measurable");
    for (Mask b : part.blocks()) {
        std::optional<double> v;
        for (std::size_t i = 0; i < act.size(); ++i) {
            if (!mask_contains(b, i)) continue;
            if (!v) v = act[i];
            else if (*v != act[i]) return false;
        }
    }
    return true;
}

Distribution distribution(const Act& act, const ProbabilityMeasure& mu) {
    require_same_space(act.space(), mu.space(), "distribution");
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < act.size(); ++i)
        if (mu.weight(i) > 0.0) atoms.emplace_back(act[i], mu.weight(i));
    std::sort(atoms.begin(), atoms.end());
    Distribution d;
    for (const auto& [v, w] : atoms) {
        if (!d.support.empty() && d.support.back() == v) {
            d.prob.back() += w;
        } else {
            d.support.push_back(v);
            d.prob.push_back(w);
        }
    }
    return d;
}

namespace {

std::vector<double> merged_breakpoints(const Act& x, const Act& y) {
    std::vector<double> pts(x.payoff().begin(), x.payoff().end());
    pts.insert(pts.end(), y.payoff().begin(), y.payoff().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double survival(const Act& x, const ProbabilityMeasure& mu, double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > t) s += mu.weight(i);
    return s;
}

double lower_partial_moment(const Act& x, const ProbabilityMeasure& mu, double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < t) s += mu.weight(i) * (t - x[i]);
    return s;
}

} // namespace

bool fsd_geq(const Act& x, const Act& y, const ProbabilityMeasure& mu) {
    require_same_space(x.space(), y.space(), "fsd_geq");
    require_same_space(x.space(), mu.space(), "fsd_geq");
    // Survival functions are right-continuous steps that only move at payoffs.
    for (double t : merged_breakpoints(x, y))
        if (survival(x, mu, t) < survival(y, mu, t) - kWeightTolerance) return false;
    return true;
}

bool ssd_geq(const Act& x, const Act& y, const ProbabilityMeasure& mu) {
    require_same_space(x.space(), y.space(), "ssd_geq");
    require_same_space(x.space(), mu.space(), "ssd_geq");
    // Both lower partial moments are piecewise linear with kinks at payoffs.
    for (double t : merged_breakpoints(x, y)) {
        double lx = lower_partial_moment(x, mu, t);
        double ly = lower_partial_moment(y, mu, t);
        double scale = std::max({1.0, std::abs(t), x.norm(), y.norm()});
        if (lx > ly + kWeightTolerance * scale) return false;
    }
    return true;
}

bool as_dominates(const Act& x, const Act& y, const ProbabilityMeasure& mu, bool strict) {
    require_same_space(x.space(), y.space(), "as_dominates");
    require_same_space(x.space(), mu.space(), "as_dominates");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (mu.weight(i) == 0.0) continue;
        if (strict ? !(x[i] > y[i]) : !(x[i] >= y[i])) return false;
    }
    return true;
}

bool comonotonic(const Act& x, const Act& y) {
    require_same_space(x.space(), y.space(), "comonotonic");
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            bool up_x = x[i] > x[j], down_x = x[i] < x[j];
            bool up_y = y[i] > y[j], down_y = y[i] < y[j];
            if ((up_x && down_y) || (down_x && up_y)) return false;
        }
    return true;
}

bool equal_in_distribution(const Act& x, const Act& y, const ProbabilityMeasure& mu) {
    return fsd_geq(x, y, mu) && fsd_geq(y, x, mu);
}

} // namespace crdu
