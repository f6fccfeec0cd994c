#include "crdu/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crdu {

std::vector<std::size_t> descending_order(const Act& x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    return idx;
}

std::vector<ChoquetTerm> choquet_decomposition(const Act& x, const Capacity& nu) {
    require_same_space(x.space(), nu.space(), "choquet");
    std::vector<ChoquetTerm> terms;
    terms.reserve(x.size());
    const auto order = descending_order(x);
    Mask top = 0;
    double prev = 0.0;
    // Tied states enter together, so only the level sets {X >= v} are read.
    for (std::size_t k = 0; k < order.size(); ++k) {
        top |= Mask{1} << order[k];
        if (k + 1 < order.size() && x[order[k + 1]] == x[order[k]]) continue;
        const double cur = nu(top);
        terms.push_back({x[order[k]], top, cur - prev});
        prev = cur;
    }
    return terms;
}

double choquet(const Act& x, const Capacity& nu) {
    double sum = 0.0;
    for (const auto& t : choquet_decomposition(x, nu)) sum += t.payoff * t.weight;
    return sum;
}

double choquet_riemann_oracle(const Act& x, const Capacity& nu, std::size_t grid) {
    require_same_space(x.space(), nu.space(), "choquet_riemann_oracle");
    if (grid < 10000) throw DomainError("Riemann oracle needs grid >= 1e4");
    const double a = x.min(), b = x.max();
    // Tails: nu(X > t) = 1 below a and 0 from b on.
    double value = std::max(a, 0.0) + std::min(b, 0.0);
    if (b == a) return value;

    std::vector<double> breaks(x.payoff().begin(), x.payoff().end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const double h = (b - a) / static_cast<double>(grid);
    std::size_t next = 0;  // first breakpoint strictly above the current t
    double level = 0.0;
    bool fresh = false;
    for (std::size_t k = 0; k < grid; ++k) {
        const double t = a + (static_cast<double>(k) + 0.5) * h;
        while (next < breaks.size() && breaks[next] <= t) {
            ++next;
            fresh = false;
        }
        if (!fresh) {
            level = nu(x.strict_upper_set(t));
            fresh = true;
        }
        value += t >= 0.0 ? h * level : h * (level - 1.0);
    }
    return value;
}

bool comonotone_additivity_check(const Act& x, const Act& y, const Capacity& nu) {
    if (!comonotonic(x, y)) throw DomainError("acts are not comonotonic");
    double lhs = choquet(x + y, nu);
    double rhs = choquet(x, nu) + choquet(y, nu);
    return std::abs(lhs - rhs) <= kComonotoneTolerance;
}

} // namespace crdu
