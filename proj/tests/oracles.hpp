#pragma once

// Independent brute-force reference implementations used only by tests.
// Everything here computes straight from definitions -- full-space sums,
// explicit subset/ordering enumeration -- deliberately avoiding the
// algorithms the library uses (deletion recursions, scope-local enumeration,
// memoized searches), so agreement is meaningful evidence of correctness.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "lll/events.hpp"

namespace oracle {

/// Adjacency given as symmetric bool matrix (diagonal ignored).
inline bool mask_independent(const std::vector<std::vector<bool>>& adj, std::uint32_t mask) {
    const int m = static_cast<int>(adj.size());
    for (int i = 0; i < m; ++i) {
        if (!(mask >> i & 1)) continue;
        for (int j = i + 1; j < m; ++j)
            if ((mask >> j & 1) && adj[i][j]) return false;
    }
    return true;
}

/// All independent sets as bitmasks, by filtering every subset.
inline std::vector<std::uint32_t> independent_masks(const std::vector<std::vector<bool>>& adj) {
    const int m = static_cast<int>(adj.size());
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask)
        if (mask_independent(adj, mask)) out.push_back(mask);
    return out;
}

/// Alternating sum Q(I) = sum over independent J >= I of (-1)^(|J|-|I|) prod p,
/// straight from the definition.
inline double q_signed_sum(const std::vector<std::vector<bool>>& adj,
                           const std::vector<double>& probs, std::uint32_t i_mask) {
    double total = 0.0;
    for (std::uint32_t j_mask : independent_masks(adj)) {
        if ((j_mask & i_mask) != i_mask) continue;
        double prod = 1.0;
        for (int v = 0; v < static_cast<int>(probs.size()); ++v)
            if (j_mask >> v & 1) prod *= probs[v];
        const int extra = std::popcount(j_mask) - std::popcount(i_mask);
        total += (extra % 2 == 0) ? prod : -prod;
    }
    return total;
}

/// Event probability by enumerating the entire space, scope or not.
inline double event_probability_full(const lll::var_space& space, const lll::scoped_event& e) {
    const int n = space.n();
    lll::assignment x(n, 0);
    double total = 0.0;
    auto rec = [&](auto&& self, int var, double w) -> void {
        if (var == n) {
            if (e.holds(x)) total += w;
            return;
        }
        for (int v = 0; v < space.domain(var); ++v) {
            x[var] = v;
            self(self, var + 1, w * space.probs(var)[v]);
        }
    };
    rec(rec, 0, 1.0);
    return total;
}

/// Calls fn(pi) for every permutation of [0, n).
template <typename Fn>
void for_each_permutation(int n, Fn&& fn) {
    std::vector<int> values(n);
    std::iota(values.begin(), values.end(), 0);
    do {
        fn(values);
    } while (std::next_permutation(values.begin(), values.end()));
}

/// Probability of an atomic permutation event by counting permutations.
inline double perm_event_probability_enum(int n, const lll::atomic_perm_event& e) {
    std::uint64_t hits = 0, total = 0;
    for_each_permutation(n, [&](const std::vector<int>& values) {
        ++total;
        bool ok = true;
        for (auto [x, y] : e.pairs())
            if (values[x] != y) ok = false;
        if (ok) ++hits;
    });
    return static_cast<double>(hits) / static_cast<double>(total);
}

/// Probability that a uniform permutation satisfies at least one event.
inline double perm_any_probability_enum(int n,
                                        const std::vector<lll::atomic_perm_event>& events) {
    std::uint64_t hits = 0, total = 0;
    for_each_permutation(n, [&](const std::vector<int>& values) {
        ++total;
        for (const auto& e : events) {
            bool ok = true;
            for (auto [x, y] : e.pairs())
                if (values[x] != y) ok = false;
            if (ok) {
                ++hits;
                break;
            }
        }
    });
    return static_cast<double>(hits) / static_cast<double>(total);
}

/// Orderability check by trying every ordering of Y explicitly.
inline bool orderable_by_orderings(const std::vector<lll::atomic_perm_event>& y,
                                   const lll::atomic_perm_event& a) {
    std::vector<int> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    auto pair_related = [](std::pair<int, int> z, const lll::atomic_perm_event& b) {
        for (auto [x2, y2] : b.pairs())
            if (z.first == x2 || z.second == y2) return true;
        return false;
    };
    do {
        bool ok = true;
        for (std::size_t i = 0; i < order.size() && ok; ++i) {
            bool found = false;
            for (auto z : a.pairs()) {
                if (!pair_related(z, y[order[i]])) continue;
                bool fresh = true;
                for (std::size_t j = 0; j < i; ++j)
                    if (pair_related(z, y[order[j]])) fresh = false;
                if (fresh) {
                    found = true;
                    break;
                }
            }
            ok = found;
        }
        if (ok) return true;
    } while (std::next_permutation(order.begin(), order.end()));
    return y.empty();
}

/// Max deviation of j-tuple pattern frequencies from 2^-j, counting every
/// (variable tuple, bit pattern) cell directly over the samples.
inline double jwise_deviation_enum(const std::vector<lll::assignment>& samples, int j) {
    const int n = static_cast<int>(samples[0].size());
    double worst = 0.0;
    std::vector<int> vars(j);
    auto tuples = [&](auto&& self, int t, int lo) -> void {
        if (t == j) {
            for (unsigned y = 0; y < (1u << j); ++y) {
                long long match = 0;
                for (const auto& x : samples) {
                    bool ok = true;
                    for (int u = 0; u < j; ++u)
                        if (x[vars[u]] != static_cast<int>(y >> u & 1u)) ok = false;
                    match += ok;
                }
                const double freq =
                    static_cast<double>(match) / static_cast<double>(samples.size());
                worst = std::max(worst, std::abs(freq - std::ldexp(1.0, -j)));
            }
            return;
        }
        for (int v = lo; v < n; ++v) {
            vars[t] = v;
            self(self, t + 1, v + 1);
        }
    };
    tuples(tuples, 0, 0);
    return worst;
}

/// Total weight of stable-set sequences with at most `depth` levels, by
/// materializing every sequence level by level.
inline double stable_seq_weight_enum(const std::vector<std::vector<bool>>& adj,
                                     const std::vector<double>& probs,
                                     std::uint32_t start_mask, int depth) {
    if (!mask_independent(adj, start_mask)) return 0.0;
    const int m = static_cast<int>(adj.size());
    auto closed = [&](std::uint32_t mask) {
        std::uint32_t c = mask;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1)
                for (int j = 0; j < m; ++j)
                    if (adj[i][j]) c |= std::uint32_t{1} << j;
        return c;
    };
    auto weight = [&](std::uint32_t mask) {
        double w = 1.0;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) w *= probs[i];
        return w;
    };
    double total = 0.0;
    auto rec = [&](auto&& self, std::uint32_t prev, double w, int levels_left) -> void {
        total += w;
        if (levels_left == 0) return;
        const std::uint32_t cand = closed(prev);
        for (std::uint32_t next = 1; next < (std::uint32_t{1} << m); ++next) {
            if ((next & cand) != next) continue;
            if (!mask_independent(adj, next)) continue;
            self(self, next, w * weight(next), levels_left - 1);
        }
    };
    rec(rec, start_mask, weight(start_mask), depth - 1);
    return depth >= 1 ? total : 0.0;
}

/// Wilson score lower bound for a binomial proportion at critical value z.
inline double wilson_lower(long long successes, long long trials, double z) {
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / t;
    const double z2 = z * z;
    const double center = p + z2 / (2.0 * t);
    const double margin = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t));
    return std::max(0.0, (center - margin) / (1.0 + z2 / t));
}

} // namespace oracle
