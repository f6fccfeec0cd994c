#include "crdu/core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "crdu/choquet.hpp"

namespace crdu {

namespace {

constexpr double kSlackEps = 1e-9;

// Tight-set bitset over constraint indices: 0..n-1 are mu(i) >= 0, then one
// index per halfspace.
using Bits = std::vector<std::uint64_t>;

struct Vertex {
    std::vector<double> x;
    Bits tight;
};

void set_bit(Bits& b, std::size_t k) { b[k / 64] |= std::uint64_t{1} << (k % 64); }

bool get_bit(const Bits& b, std::size_t k) { return (b[k / 64] >> (k % 64)) & 1u; }

std::size_t bit_count(const Bits& b) {
    std::size_t c = 0;
    for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

class Enumerator {
public:
    Enumerator(std::size_t n, const std::vector<Halfspace>& rows) : n_(n), rows_(rows), words_((n + rows.size()) / 64 + 1) {}

    std::vector<std::vector<double>> run() {
        std::vector<Vertex> verts;
        for (std::size_t i = 0; i < n_; ++i) {
            Vertex v{std::vector<double>(n_, 0.0), Bits(words_, 0)};
            v.x[i] = 1.0;
            for (std::size_t j = 0; j < n_; ++j)
                if (j != i) set_bit(v.tight, j);
            verts.push_back(std::move(v));
        }
        for (std::size_t r = 0; r < rows_.size() && !verts.empty(); ++r) verts = add_row(std::move(verts), r);
        return finish(verts);
    }

private:
    double slack(const std::vector<double>& x, std::size_t r) const {
        const auto& c = rows_[r].coef;
        double s = -rows_[r].rhs;
        for (std::size_t i = 0; i < n_; ++i) s += c[i] * x[i];
        return s;
    }

    // Rank of the common tight rows plus the sum row equals n - 1 exactly
    // when the two vertices span an edge.
    bool adjacent(const Bits& common) const {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < n_ + rows_.size(); ++k)
            if (get_bit(common, k)) idx.push_back(k);
        Eigen::MatrixXd m(static_cast<Eigen::Index>(idx.size() + 1), static_cast<Eigen::Index>(n_));
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < n_; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row_coef(idx[r], c);
        m.row(static_cast<Eigen::Index>(idx.size())).setOnes();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        lu.setThreshold(1e-10);
        return static_cast<std::size_t>(lu.rank()) == n_ - 1;
    }

    double row_coef(std::size_t k, std::size_t c) const {
        if (k < n_) return k == c ? 1.0 : 0.0;
        return rows_[k - n_].coef[c];
    }

    double row_rhs(std::size_t k) const { return k < n_ ? 0.0 : rows_[k - n_].rhs; }

    std::vector<Vertex> add_row(std::vector<Vertex> verts, std::size_t r) {
        const std::size_t k = n_ + r;
        std::vector<double> s(verts.size());
        std::vector<std::size_t> plus, minus;
        std::vector<Vertex> out;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            s[v] = slack(verts[v].x, r);
            if (s[v] > kSlackEps) plus.push_back(v);
            else if (s[v] < -kSlackEps) minus.push_back(v);
        }
        for (std::size_t p : plus)
            for (std::size_t q : minus) {
                Bits common(words_);
                for (std::size_t w = 0; w < words_; ++w) common[w] = verts[p].tight[w] & verts[q].tight[w];
                if (n_ >= 2 && bit_count(common) + 2 < n_) continue;
                if (!adjacent(common)) continue;
                const double t = s[p] / (s[p] - s[q]);
                Vertex w{std::vector<double>(n_), common};
                for (std::size_t i = 0; i < n_; ++i) w.x[i] = verts[p].x[i] + t * (verts[q].x[i] - verts[p].x[i]);
                set_bit(w.tight, k);
                out.push_back(std::move(w));
            }
        for (std::size_t v = 0; v < verts.size(); ++v) {
            if (s[v] < -kSlackEps) continue;
            if (s[v] <= kSlackEps) set_bit(verts[v].tight, k);
            out.push_back(std::move(verts[v]));
        }
        return out;
    }

    // Re-solve each vertex from its tight system to shed accumulated rounding.
    void refine(Vertex& v) const {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < n_ + rows_.size(); ++k)
            if (get_bit(v.tight, k)) idx.push_back(k);
        Eigen::MatrixXd m(static_cast<Eigen::Index>(idx.size() + 1), static_cast<Eigen::Index>(n_));
        Eigen::VectorXd b(static_cast<Eigen::Index>(idx.size() + 1));
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t c = 0; c < n_; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row_coef(idx[r], c);
            b(static_cast<Eigen::Index>(r)) = row_rhs(idx[r]);
        }
        m.row(static_cast<Eigen::Index>(idx.size())).setOnes();
        b(static_cast<Eigen::Index>(idx.size())) = 1.0;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        qr.setThreshold(1e-10);
        if (static_cast<std::size_t>(qr.rank()) != n_) return;
        Eigen::VectorXd sol = qr.solve(b);
        double diff = 0.0;
        for (std::size_t i = 0; i < n_; ++i) diff = std::max(diff, std::abs(sol(static_cast<Eigen::Index>(i)) - v.x[i]));
        if (diff < 1e-7)
            for (std::size_t i = 0; i < n_; ++i) v.x[i] = sol(static_cast<Eigen::Index>(i));
    }

    std::vector<std::vector<double>> finish(std::vector<Vertex>& verts) const {
        std::vector<std::vector<double>> pts;
        for (auto& v : verts) {
            refine(v);
            for (double& c : v.x)
                if (c < 0.0) c = 0.0;
            double total = std::accumulate(v.x.begin(), v.x.end(), 0.0);
            for (double& c : v.x) c /= total;
            pts.push_back(std::move(v.x));
        }
        std::sort(pts.begin(), pts.end());
        std::vector<std::vector<double>> out;
        for (auto& p : pts) {
            bool dup = false;
            for (auto it = out.rbegin(); it != out.rend() && (*it)[0] >= p[0] - kVertexTolerance; ++it) {
                double d = 0.0;
                for (std::size_t i = 0; i < n_; ++i) d = std::max(d, std::abs((*it)[i] - p[i]));
                if (d <= kVertexTolerance) {
                    dup = true;
                    break;
                }
            }
            if (!dup) out.push_back(std::move(p));
        }
        return out;
    }

    std::size_t n_;
    const std::vector<Halfspace>& rows_;
    std::size_t words_;
};

std::vector<double> indicator_row(std::size_t n, Mask m, double sign) {
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (mask_contains(m, i)) c[i] = sign;
    return c;
}

void require_core_size(const Capacity& nu) {
    if (nu.size() > kCoreMaxStates) throw SpaceTooLarge(nu.size(), kCoreMaxStates);
}

std::vector<ProbabilityMeasure> to_measures(const SpacePtr& space, std::vector<std::vector<double>> pts) {
    std::vector<ProbabilityMeasure> out;
    out.reserve(pts.size());
    for (auto& p : pts) out.emplace_back(space, std::move(p));
    return out;
}

} // namespace

std::vector<std::vector<double>> enumerate_simplex_vertices(std::size_t n, const std::vector<Halfspace>& rows) {
    if (n == 0) return {};
    for (const auto& r : rows)
        if (r.coef.size() != n) throw InvariantViolation("halfspace has the wrong dimension");
    return Enumerator(n, rows).run();
}

// ---------------------------------------------------------------- CorePolytope

CorePolytope::CorePolytope(Capacity nu) : nu_(std::move(nu)) {}

std::vector<Mask> CorePolytope::constrained_events() const {
    std::vector<Mask> out;
    const Mask full = nu_.space()->full_mask();
    for (Mask m = 1; m < full; ++m) out.push_back(m);
    return out;
}

std::vector<Halfspace> CorePolytope::constraints() const {
    std::vector<Halfspace> rows;
    for (Mask m : constrained_events()) rows.push_back({indicator_row(nu_.size(), m, 1.0), nu_(m)});
    return rows;
}

bool CorePolytope::contains(const ProbabilityMeasure& mu) const { return core_membership(nu_, mu).holds; }

std::vector<ProbabilityMeasure> CorePolytope::vertices() const {
    require_core_size(nu_);
    return to_measures(nu_.space(), enumerate_simplex_vertices(nu_.size(), constraints()));
}

// ---------------------------------------------------------------- free functions

Check core_membership(const Capacity& nu, const ProbabilityMeasure& mu) {
    require_same_space(nu.space(), mu.space(), "core membership");
    const Mask full = nu.space()->full_mask();
    for (Mask m = 1; m < full; ++m)
        if (mu.probability(m) < nu(m) - kCoreSlack) return Check::fail({m}, "mu(A) < nu(A)");
    return Check::pass();
}

bool core_contains(const Capacity& nu, const ProbabilityMeasure& mu) { return core_membership(nu, mu).holds; }

std::vector<ProbabilityMeasure> core_vertices(const Capacity& nu) { return CorePolytope(nu).vertices(); }

ProbabilityMeasure marginal_vector(const Capacity& nu, const std::vector<std::size_t>& perm) {
    const std::size_t n = nu.size();
    if (perm.size() != n) throw DomainError("permutation has the wrong length");
    std::vector<double> w(n, 0.0);
    Mask seen = 0;
    double prev = 0.0;
    for (std::size_t s : perm) {
        if (s >= n || mask_contains(seen, s)) throw DomainError("not a permutation of the states");
        seen |= Mask{1} << s;
        double cur = nu(seen);
        w[s] = cur - prev;
        prev = cur;
    }
    return ProbabilityMeasure(nu.space(), std::move(w));
}

bool is_balanced(const Capacity& nu) { return !core_vertices(nu).empty(); }

Check exactness(const Capacity& nu) {
    auto verts = core_vertices(nu);
    if (verts.empty()) return Check::fail({}, "empty core");
    const Mask full = nu.space()->full_mask();
    for (Mask m = 0; m <= full; ++m) {
        double lo = 1.0;
        for (const auto& v : verts) lo = std::min(lo, v.probability(m));
        if (std::abs(lo - nu(m)) > kVertexTolerance) return Check::fail({m}, "core minimum exceeds nu(A)");
        if (m == full) break;
    }
    return Check::pass();
}

bool is_exact(const Capacity& nu) { return exactness(nu).holds; }

double distorted_expectation(std::span<const double> ux, const DistortionFunction& g, const ProbabilityMeasure& mu) {
    if (ux.size() != mu.size()) throw SpaceMismatch("utility vector and measure differ in size");
    std::vector<std::size_t> idx(ux.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ux[a] > ux[b]; });
    double sum = 0.0, mass = 0.0, prev = 0.0;
    for (std::size_t s : idx) {
        mass += mu.weight(s);
        double cur = g(std::min(mass, 1.0));
        sum += ux[s] * (cur - prev);
        prev = cur;
    }
    return sum;
}

RobustValue robust_value(const UtilityFunction& u, const DistortionFunction& g, const Capacity& nu, const Act& x) {
    require_same_space(nu.space(), x.space(), "robust_value");
    require_core_size(nu);
    std::vector<double> ux(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ux[i] = u(x[i]);

    auto candidates = core_vertices(nu);
    if (candidates.empty()) throw DomainError("empty core");
    ProbabilityMeasure chain_vec = marginal_vector(nu, descending_order(x));
    if (core_contains(nu, chain_vec)) candidates.push_back(chain_vec);

    RobustValue best{std::numeric_limits<double>::infinity(), false, {}, candidates.size()};
    for (const auto& mu : candidates) {
        double v = distorted_expectation(ux, g, mu);
        if (v < best.value) {
            best.value = v;
            best.minimizer.assign(mu.weights().begin(), mu.weights().end());
        }
    }
    bool affine_g = g.kind() == DistortionFunction::Kind::Identity ||
                    (g.kind() == DistortionFunction::Kind::Power && g.gamma() == 1.0) ||
                    (g.is_convex() && g.is_concave());
    best.exact = affine_g || is_supermodular(nu);
    return best;
}

bool chain_attainable(const Capacity& nu, const std::vector<Mask>& chain) {
    for (std::size_t i = 1; i < chain.size(); ++i)
        if (!mask_subset(chain[i - 1], chain[i])) throw DomainError("chain is not nested");
    const Mask full = nu.space()->full_mask();
    for (Mask m : chain)
        if (!mask_subset(m, full)) throw DomainError("chain event outside the state space");
    require_core_size(nu);
    auto rows = CorePolytope(nu).constraints();
    for (Mask m : chain) {
        if (m == 0 || m == full) continue;
        rows.push_back({indicator_row(nu.size(), m, -1.0), -nu(m)});
    }
    return !enumerate_simplex_vertices(nu.size(), rows).empty();
}

} // namespace crdu
