#include "lll/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "lll/errors.hpp"

namespace lll {

namespace {

using rational = boost::multiprecision::cpp_rational;

std::uint64_t to_mask(std::span<const int> members, int m) {
    std::uint64_t mask = 0;
    for (int v : members) {
        if (v < 0 || v >= m) throw std::invalid_argument("event index out of range");
        if (mask >> v & 1) throw std::invalid_argument("repeated event index");
        mask |= std::uint64_t{1} << v;
    }
    return mask;
}

/// Alternating independence-polynomial evaluation:
///   Z(S) = sum over independent K in S of (-1)^|K| * prod p,
/// computed by the deletion recursion Z(S) = Z(S - v) - p_v * Z(S - N[v])
/// with memoization over vertex masks.  Instantiated both in double and in
/// exact rational arithmetic.
template <typename T>
class zeta_calc {
  public:
    zeta_calc(std::vector<T> probs, std::vector<std::uint64_t> nbr_masks)
        : probs_(std::move(probs)), nbr_masks_(std::move(nbr_masks)) {}

    const T& z(std::uint64_t mask) {
        auto it = memo_.find(mask);
        if (it != memo_.end()) return it->second;
        T value;
        if (mask == 0) {
            value = T(1);
        } else {
            const int v = std::countr_zero(mask);
            value = z(mask & ~(std::uint64_t{1} << v));
            value -= probs_[v] * z(mask & ~nbr_masks_[v]);
        }
        return memo_.emplace(mask, std::move(value)).first->second;
    }

    T prob_product(std::uint64_t mask) const {
        T p(1);
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            p *= probs_[std::countr_zero(rest)];
        return p;
    }

  private:
    std::vector<T> probs_;
    std::vector<std::uint64_t> nbr_masks_;
    std::unordered_map<std::uint64_t, T> memo_;
};

/// Best rational approximation of x with denominator at most max_den, if it
/// reproduces x to within 1e-12 (continued-fraction convergents).
std::optional<std::pair<std::int64_t, std::int64_t>> to_small_rational(double x,
                                                                       std::int64_t max_den) {
    if (!std::isfinite(x) || x < 0.0) return std::nullopt;
    std::int64_t h0 = 1, k0 = 0, h1 = static_cast<std::int64_t>(std::floor(x)), k1 = 1;
    double v = x - std::floor(x);
    for (int iter = 0; iter < 48; ++iter) {
        if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= 1e-12)
            return std::make_pair(h1, k1);
        if (v <= 1e-15) break;
        v = 1.0 / v;
        const double af = std::floor(v);
        if (af > 4e18) break;
        const std::int64_t a = static_cast<std::int64_t>(af);
        const std::int64_t h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den || k2 <= 0) break;
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
        v -= af;
    }
    return std::nullopt;
}

std::vector<std::uint64_t> neighbor_masks(const dep_graph& g) {
    std::vector<std::uint64_t> masks(g.m());
    for (int i = 0; i < g.m(); ++i) masks[i] = g.neighbor_mask64(i);
    return masks;
}

} // namespace

double measure::mu(std::span<const int> members) const {
    std::uint64_t mask = 0;
    for (int v : members) mask |= std::uint64_t{1} << v;
    auto it = cache_.find(mask);
    return it == cache_.end() ? 0.0 : it->second;
}

measure shearer_measure(const dep_graph& g, const shearer_options& opts) {
    if (g.m() > 25) throw budget_exceeded("exact measure supports at most 25 events");
    const std::uint64_t all = g.m() == 64 ? ~std::uint64_t{0}
                                          : (std::uint64_t{1} << g.m()) - 1;
    auto nbrs = neighbor_masks(g);

    // Exact rational arithmetic when the probabilities allow it and the graph
    // is small enough that big-rational growth stays affordable.
    std::optional<std::vector<rational>> rational_probs;
    if (opts.allow_exact_rational && g.m() <= 16) {
        std::vector<rational> rp;
        bool ok = true;
        for (int i = 0; i < g.m() && ok; ++i) {
            auto frac = to_small_rational(g.prob(i), 1'000'000);
            if (frac) rp.emplace_back(frac->first, frac->second);
            else ok = false;
        }
        if (ok) rational_probs = std::move(rp);
    }

    measure result;
    std::vector<int> filter(g.m());
    for (int i = 0; i < g.m(); ++i) filter[i] = i;
    indep_enum_options enum_opts;
    enum_opts.max_sets = opts.max_sets;
    // max_size stays unbounded; the m <= 25 cap replaces the 30-vertex guard.
    enum_opts.max_size = g.m();

    auto record = [&result](std::uint64_t mask, double mu_value, bool positive,
                            std::span<const int> members) {
        result.cache_.emplace(mask, mu_value);
        if (!positive && result.satisfied_) {
            result.satisfied_ = false;
            result.first_violation_ = std::vector<int>(members.begin(), members.end());
        }
    };

    if (rational_probs) {
        zeta_calc<rational> calc(std::move(*rational_probs), nbrs);
        const rational q_empty = calc.z(all);
        result.q_empty_ = static_cast<double>(q_empty);
        for_each_independent_set(
            g, filter,
            [&](std::span<const int> members) {
                std::uint64_t mask = to_mask(members, g.m());
                std::uint64_t closed = 0;
                for (int v : members) closed |= nbrs[v];
                const rational q = calc.prob_product(mask) * calc.z(all & ~closed);
                const double mu_value =
                    q_empty == 0 ? 0.0 : static_cast<double>(rational(q / q_empty));
                record(mask, mu_value, q > 0, members);
            },
            enum_opts);
    } else {
        std::vector<double> probs(g.m());
        for (int i = 0; i < g.m(); ++i) probs[i] = g.prob(i);
        zeta_calc<double> calc(std::move(probs), nbrs);
        const double q_empty = calc.z(all);
        result.q_empty_ = q_empty;
        for_each_independent_set(
            g, filter,
            [&](std::span<const int> members) {
                std::uint64_t mask = to_mask(members, g.m());
                std::uint64_t closed = 0;
                for (int v : members) closed |= nbrs[v];
                const double q = calc.prob_product(mask) * calc.z(all & ~closed);
                record(mask, q_empty == 0.0 ? 0.0 : q / q_empty, q > 0.0, members);
            },
            enum_opts);
    }
    return result;
}

double stable_seq_weight(const dep_graph& g, std::span<const int> start, int depth,
                         std::size_t max_sequences) {
    if (g.m() > 64) throw budget_exceeded("stable-sequence sums support at most 64 events");
    if (depth > 10) throw budget_exceeded("stable-sequence depth cap is 10");
    if (depth <= 0) return 0.0;
    const std::uint64_t start_mask = to_mask(start, g.m());
    if (!g.is_independent(start)) return 0.0;

    auto nbrs = neighbor_masks(g);
    auto closed_of = [&nbrs](std::uint64_t mask) {
        std::uint64_t closed = 0;
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            closed |= nbrs[std::countr_zero(rest)];
        return closed;
    };
    auto prob_product = [&g](std::uint64_t mask) {
        double p = 1.0;
        for (std::uint64_t rest = mask; rest; rest &= rest - 1)
            p *= g.prob(std::countr_zero(rest));
        return p;
    };

    std::size_t visited = 0;
    // tail(C, d) = total weight of all continuations of up to d further
    // levels, where the next level must be a nonempty independent subset of
    // the candidate mask C.  Depends on the previous level only through C.
    std::unordered_map<std::uint64_t, double> memo[11];
    auto tail = [&](auto&& self, std::uint64_t candidates, int d) -> double {
        if (d == 0 || candidates == 0) return 0.0;
        auto it = memo[d].find(candidates);
        if (it != memo[d].end()) return it->second;
        double total = 0.0;
        std::vector<int> order;
        for (std::uint64_t rest = candidates; rest; rest &= rest - 1)
            order.push_back(std::countr_zero(rest));
        std::vector<int> chosen;
        std::uint64_t chosen_mask = 0;
        auto rec = [&](auto&& rec_self, std::size_t from, double weight) -> void {
            for (std::size_t k = from; k < order.size(); ++k) {
                const int v = order[k];
                if (chosen_mask & nbrs[v]) continue; // adjacent to a chosen vertex
                if (++visited > max_sequences)
                    throw budget_exceeded("stable-sequence enumeration exceeds budget");
                chosen.push_back(v);
                chosen_mask |= std::uint64_t{1} << v;
                const double w = weight * g.prob(v);
                total += w * (1.0 + self(self, closed_of(chosen_mask), d - 1));
                rec_self(rec_self, k + 1, w);
                chosen.pop_back();
                chosen_mask &= ~(std::uint64_t{1} << v);
            }
        };
        rec(rec, 0, 1.0);
        memo[d].emplace(candidates, total);
        return total;
    };

    return prob_product(start_mask) *
           (1.0 + tail(tail, closed_of(start_mask), depth - 1));
}

} // namespace lll
