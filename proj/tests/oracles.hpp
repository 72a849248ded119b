// Independent reference implementations used only by tests. Each one takes
// the slow, obviously-correct route so the library can be checked against
// something it shares no code with.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

// Minimum-cost injective assignment of the smaller side into the larger by
// exhaustive recursion with cost pruning.
class BruteForceAssignment {
public:
    // cost[i][j]: matching small-side i with large-side j.
    explicit BruteForceAssignment(std::vector<std::vector<long long>> cost)
        : cost_(std::move(cost)) {}

    long long solve() {
        best_ = std::numeric_limits<long long>::max();
        used_.assign(cost_.empty() ? 0 : cost_[0].size(), false);
        recurse(0, 0);
        return best_;
    }

private:
    void recurse(std::size_t i, long long acc) {
        if (acc >= best_) return;
        if (i == cost_.size()) {
            best_ = acc;
            return;
        }
        for (std::size_t j = 0; j < used_.size(); ++j) {
            if (used_[j]) continue;
            used_[j] = true;
            recurse(i + 1, acc + cost_[i][j]);
            used_[j] = false;
        }
    }

    std::vector<std::vector<long long>> cost_;
    std::vector<char> used_;
    long long best_ = 0;
};

inline long long brute_force_chain_cost(const std::vector<int>& sources,
                                        const std::vector<int>& targets) {
    const auto& small = sources.size() <= targets.size() ? sources : targets;
    const auto& large = sources.size() <= targets.size() ? targets : sources;
    if (small.empty()) return 0;
    std::vector<std::vector<long long>> cost(small.size(),
                                             std::vector<long long>(large.size()));
    for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = 0; j < large.size(); ++j)
            cost[i][j] = std::llabs(static_cast<long long>(small[i]) - large[j]);
    return BruteForceAssignment(std::move(cost)).solve();
}

struct Point {
    int col;
    int row;
};

inline long long brute_force_manhattan_cost(const std::vector<Point>& sources,
                                            const std::vector<Point>& targets) {
    const bool targets_small = targets.size() <= sources.size();
    const auto& small = targets_small ? targets : sources;
    const auto& large = targets_small ? sources : targets;
    if (small.empty()) return 0;
    std::vector<std::vector<long long>> cost(small.size(),
                                             std::vector<long long>(large.size()));
    for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = 0; j < large.size(); ++j)
            cost[i][j] = std::abs(small[i].col - large[j].col) +
                         std::abs(small[i].row - large[j].row);
    return BruteForceAssignment(std::move(cost)).solve();
}

// P(Bino(n, p) >= k) by extended-precision log-space summation of the pmf.
inline double binomial_ccdf_sum(long long n, double p, long long k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log(1.0L - static_cast<long double>(p));
    long double sum = 0.0L;
    for (long long i = k; i <= n; ++i) {
        const long double lc = lgammal(static_cast<long double>(n) + 1.0L) -
                               lgammal(static_cast<long double>(i) + 1.0L) -
                               lgammal(static_cast<long double>(n - i) + 1.0L);
        sum += expl(lc + static_cast<long double>(i) * lp +
                    static_cast<long double>(n - i) * lq);
    }
    if (sum > 1.0L) sum = 1.0L;
    return static_cast<double>(sum);
}

} // namespace oracle
