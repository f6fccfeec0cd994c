#pragma once

// Independent reference implementations used only by the tests. None of
// them calls the production path they are compared against.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "crdu/capacity.hpp"
#include "crdu/space.hpp"

namespace crdu::oracle {

inline bool bit(Mask m, std::size_t i) { return ((m >> i) & 1u) != 0; }

/// Choquet integral through the Moebius transform:
/// sum over nonempty A of m(A) * min_{i in A} X_i.
inline double choquet_moebius(const Act& x, const Capacity& nu) {
    const std::size_t n = x.size();
    const Mask full = static_cast<Mask>((1u << n) - 1);
    double total = 0.0;
    for (Mask a = 1; a <= full; ++a) {
        double m = 0.0;
        for (Mask b = a;; b = (b - 1) & a) {
            const int sign = (std::popcount(a) - std::popcount(b)) % 2 == 0 ? 1 : -1;
            m += sign * nu(b);
            if (b == 0) break;
        }
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (bit(a, i)) lo = std::min(lo, x[i]);
        total += m * lo;
        if (a == full) break;
    }
    return total;
}

/// Every pair (A, B); no local shortcut.
inline bool supermodular_pairs(const std::vector<double>& t, std::size_t n, double tol = 1e-12) {
    const Mask count = static_cast<Mask>(1u << n);
    for (Mask a = 0; a < count; ++a)
        for (Mask b = 0; b < count; ++b)
            if (t[a | b] + t[a & b] < t[a] + t[b] - tol) return false;
    return true;
}

inline std::vector<double> table_of(const Capacity& nu) { return {nu.values().begin(), nu.values().end()}; }

/// Gaussian elimination with partial pivoting; false when singular.
inline bool solve(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-10) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return true;
}

/// Core vertices by brute force: every choice of n-1 tight rows among
/// mu(A) >= nu(A) and mu_i >= 0, plus sum mu = 1, solved and filtered for
/// feasibility. Rows sorted lexicographically, duplicates merged at 1e-9.
inline std::vector<std::vector<double>> core_vertices_brute(const Capacity& nu) {
    const std::size_t n = nu.size();
    const Mask full = static_cast<Mask>((1u << n) - 1);
    std::vector<std::pair<std::vector<double>, double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> r(n, 0.0);
        r[i] = 1.0;
        rows.emplace_back(r, 0.0);
    }
    for (Mask a = 1; a < full; ++a) {
        std::vector<double> r(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) r[i] = bit(a, i) ? 1.0 : 0.0;
        rows.emplace_back(r, nu(a));
    }
    auto feasible = [&](const std::vector<double>& x) {
        for (const auto& [r, rhs] : rows) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += r[i] * x[i];
            if (s < rhs - 1e-9) return false;
        }
        return true;
    };
    std::vector<std::vector<double>> out;
    const std::size_t k = n - 1;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    auto consider = [&] {
        std::vector<std::vector<double>> a{std::vector<double>(n, 1.0)};
        std::vector<double> b{1.0};
        for (std::size_t p : pick) {
            a.push_back(rows[p].first);
            b.push_back(rows[p].second);
        }
        std::vector<double> x;
        if (solve(a, b, x) && feasible(x)) out.push_back(x);
    };
    if (k == 0) {
        out.push_back({1.0});
        return out;
    }
    while (true) {
        consider();
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == rows.size() - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    std::vector<std::vector<double>> uniq;
    for (const auto& v : out) {
        bool dup = false;
        for (const auto& w : uniq) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(v[i] - w[i]));
            dup = dup || d <= 1e-9;
        }
        if (!dup) uniq.push_back(v);
    }
    return uniq;
}

/// Max-norm distance between two vertex sets matched greedily; infinity if
/// the sizes differ.
inline double vertex_set_distance(const std::vector<std::vector<double>>& a,
                                  const std::vector<std::vector<double>>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& v : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& w : b) {
            double d = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) d = std::max(d, std::abs(v[i] - w[i]));
            best = std::min(best, d);
        }
        worst = std::max(worst, best);
    }
    return worst;
}

/// Hand-rolled draws for the property tests, separate from the library
/// samplers.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
    bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

    std::vector<double> simplex(std::size_t n) {
        std::vector<double> w(n);
        double s = 0.0;
        for (double& v : w) s += (v = -std::log(real(1e-12, 1.0)));
        for (double& v : w) v /= s;
        double drift = 1.0;
        for (double v : w) drift -= v;
        w[0] += drift;
        return w;
    }

    std::vector<double> payoffs(std::size_t n, double lo, double hi, bool ties = false) {
        std::vector<double> v(n);
        for (double& x : v) x = ties ? std::round(real(lo, hi)) : real(lo, hi);
        return v;
    }

    /// Monotone capacity: nu(A) = max over subsets of random increments,
    /// scaled to nu(full) = 1.
    std::vector<double> monotone_table(std::size_t n) {
        const Mask count = static_cast<Mask>(1u << n);
        std::vector<double> t(count, 0.0);
        for (Mask a = 1; a < count; ++a) {
            double m = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (bit(a, i)) m = std::max(m, t[a & ~(Mask{1} << i)]);
            t[a] = m + real(0.0, 1.0);
        }
        const double top = t[count - 1];
        for (double& v : t) v /= top;
        t[count - 1] = 1.0;
        return t;
    }
};

} // namespace crdu::oracle
