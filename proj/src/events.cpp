#include "lll/events.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "lll/errors.hpp"

namespace lll {

var_space::var_space(std::vector<std::vector<double>> probs) : probs_(std::move(probs)) {
    for (const auto& row : probs_) {
        if (row.empty()) throw std::invalid_argument("variable with empty domain");
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument("invalid probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("variable probabilities must sum to 1");
    }
}

var_space var_space::uniform(int n, int domain) {
    if (n < 0 || domain <= 0) throw std::invalid_argument("bad space dimensions");
    std::vector<std::vector<double>> probs(n, std::vector<double>(domain, 1.0 / domain));
    return var_space(std::move(probs));
}

assignment var_space::sample(rng_stream& rng) const {
    assignment x(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) x[i] = rng.next_categorical(probs_[i]);
    return x;
}

// --- scoped_event -----------------------------------------------------------

scoped_event scoped_event::conjunction(std::vector<std::pair<int, int>> var_vals) {
    std::sort(var_vals.begin(), var_vals.end());
    for (std::size_t i = 0; i + 1 < var_vals.size(); ++i)
        if (var_vals[i].first == var_vals[i + 1].first)
            throw std::invalid_argument("conjunction mentions a variable twice");
    scoped_event e;
    for (auto [var, val] : var_vals) {
        if (var < 0 || val < 0) throw std::invalid_argument("negative variable or value");
        e.scope_.push_back(var);
        e.conj_values_.push_back(val);
    }
    return e;
}

scoped_event scoped_event::equals(int var, int value) { return conjunction({{var, value}}); }

scoped_event scoped_event::value_in(int var, std::vector<int> values) {
    if (values.empty()) throw std::invalid_argument("empty value set");
    if (values.size() == 1) return equals(var, values[0]);
    std::sort(values.begin(), values.end());
    return predicate({var}, [values = std::move(values)](std::span<const int> v) {
        return std::binary_search(values.begin(), values.end(), v[0]);
    });
}

scoped_event scoped_event::predicate(std::vector<int> scope,
                                     std::function<bool(std::span<const int>)> pred) {
    std::sort(scope.begin(), scope.end());
    if (std::adjacent_find(scope.begin(), scope.end()) != scope.end())
        throw std::invalid_argument("scope mentions a variable twice");
    scoped_event e;
    e.scope_ = std::move(scope);
    e.pred_ = std::move(pred);
    return e;
}

bool scoped_event::holds(const assignment& x) const {
    if (is_conjunction()) {
        for (std::size_t k = 0; k < scope_.size(); ++k)
            if (x[scope_[k]] != conj_values_[k]) return false;
        return true;
    }
    // Gather scoped values, then delegate to the predicate.
    static thread_local std::vector<int> buf;
    buf.resize(scope_.size());
    for (std::size_t k = 0; k < scope_.size(); ++k) buf[k] = x[scope_[k]];
    return pred_(buf);
}

bool scoped_event::holds_scoped(std::span<const int> scoped_vals) const {
    if (is_conjunction()) {
        for (std::size_t k = 0; k < scope_.size(); ++k)
            if (scoped_vals[k] != conj_values_[k]) return false;
        return true;
    }
    return pred_(scoped_vals);
}

// --- permutation ------------------------------------------------------------

permutation::permutation(int n) : fwd_(n), inv_(n) {
    if (n < 0) throw std::invalid_argument("negative permutation size");
    for (int i = 0; i < n; ++i) fwd_[i] = inv_[i] = i;
}

permutation permutation::random(int n, rng_stream& rng) {
    permutation pi(n);
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(pi.fwd_[i], pi.fwd_[j]);
    }
    for (int i = 0; i < n; ++i) pi.inv_[pi.fwd_[i]] = i;
    return pi;
}

void permutation::swap_positions(int x1, int x2) {
    std::swap(fwd_[x1], fwd_[x2]);
    inv_[fwd_[x1]] = x1;
    inv_[fwd_[x2]] = x2;
}

// --- atomic_perm_event ------------------------------------------------------

atomic_perm_event::atomic_perm_event(std::vector<std::pair<int, int>> pairs)
    : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        if (pairs_[i].first < 0 || pairs_[i].second < 0)
            throw std::invalid_argument("negative position or value in permutation event");
        for (std::size_t j = i + 1; j < pairs_.size(); ++j) {
            if (pairs_[i].first == pairs_[j].first || pairs_[i].second == pairs_[j].second)
                throw std::invalid_argument(
                    "permutation event repeats a position or a value");
        }
    }
}

bool atomic_perm_event::holds(const permutation& pi) const {
    for (auto [x, y] : pairs_)
        if (pi(x) != y) return false;
    return true;
}

bool atomic_perm_event::contains(const atomic_perm_event& other) const {
    return std::includes(pairs_.begin(), pairs_.end(), other.pairs_.begin(),
                         other.pairs_.end());
}

// --- probabilities ----------------------------------------------------------

namespace {

/// Calls `fn(scoped values, weight)` for every joint value of the variables in
/// `scope` (sorted, distinct), where weight is the product of marginals.
template <typename Fn>
void enumerate_scope(const var_space& space, const std::vector<int>& scope, Fn&& fn) {
    std::uint64_t states = 1;
    for (int var : scope) {
        if (var >= space.n()) throw std::invalid_argument("event scope outside space");
        states *= static_cast<std::uint64_t>(space.domain(var));
        if (states > kMaxScopeStates)
            throw scope_too_large("joint scope enumeration exceeds budget");
    }
    const int k = static_cast<int>(scope.size());
    std::vector<int> vals(k, 0);
    auto rec = [&](auto&& self, int level, double weight) -> void {
        if (level == k) {
            fn(std::span<const int>(vals), weight);
            return;
        }
        auto probs = space.probs(scope[level]);
        for (int v = 0; v < static_cast<int>(probs.size()); ++v) {
            vals[level] = v;
            self(self, level + 1, weight * probs[v]);
        }
    };
    rec(rec, 0, 1.0);
}

std::vector<int> union_scope(std::span<const scoped_event* const> a,
                             std::span<const scoped_event* const> b) {
    std::vector<int> scope;
    for (const auto* e : a) scope.insert(scope.end(), e->scope().begin(), e->scope().end());
    for (const auto* e : b) scope.insert(scope.end(), e->scope().begin(), e->scope().end());
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    return scope;
}

} // namespace

double event_probability(const var_space& space, const scoped_event& e) {
    if (e.is_conjunction()) {
        double p = 1.0;
        auto vals = e.conjunction_values();
        for (std::size_t k = 0; k < e.scope().size(); ++k) {
            int var = e.scope()[k];
            if (var >= space.n() || vals[k] >= space.domain(var))
                throw std::invalid_argument("event outside space");
            p *= space.probs(var)[vals[k]];
        }
        return p;
    }
    const scoped_event* pe = &e;
    return joint_probability(space, std::span<const scoped_event* const>(&pe, 1), {});
}

double joint_probability(const var_space& space,
                         std::span<const scoped_event* const> positive,
                         std::span<const scoped_event* const> negative) {
    std::vector<int> scope = union_scope(positive, negative);
    // Map each event's scope into positions of the union scope once.
    auto index_map = [&scope](const scoped_event& e) {
        std::vector<int> idx(e.scope().size());
        for (std::size_t k = 0; k < e.scope().size(); ++k)
            idx[k] = static_cast<int>(
                std::lower_bound(scope.begin(), scope.end(), e.scope()[k]) - scope.begin());
        return idx;
    };
    std::vector<std::vector<int>> pos_idx, neg_idx;
    for (const auto* e : positive) pos_idx.push_back(index_map(*e));
    for (const auto* e : negative) neg_idx.push_back(index_map(*e));

    double total = 0.0;
    std::vector<int> buf;
    enumerate_scope(space, scope, [&](std::span<const int> vals, double w) {
        auto eval = [&](const scoped_event& e, const std::vector<int>& idx) {
            buf.resize(idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) buf[k] = vals[idx[k]];
            return e.holds_scoped(buf);
        };
        for (std::size_t j = 0; j < pos_idx.size(); ++j)
            if (!eval(*positive[j], pos_idx[j])) return;
        for (std::size_t j = 0; j < neg_idx.size(); ++j)
            if (eval(*negative[j], neg_idx[j])) return;
        total += w;
    });
    return total;
}

double any_probability(const var_space& space, std::span<const scoped_event> events) {
    std::vector<const scoped_event*> ptrs;
    ptrs.reserve(events.size());
    for (const auto& e : events) ptrs.push_back(&e);
    return 1.0 - joint_probability(space, {}, ptrs);
}

double perm_event_probability(int n, const atomic_perm_event& e) {
    if (e.size() > n) return 0.0;
    for (auto [x, y] : e.pairs())
        if (x >= n || y >= n) throw std::invalid_argument("event outside permutation size");
    double p = 1.0;
    for (int i = 0; i < e.size(); ++i) p /= static_cast<double>(n - i);
    return p;
}

double perm_any_probability(int n, std::span<const atomic_perm_event> events) {
    if (events.size() > static_cast<std::size_t>(kMaxUnionEvents))
        throw budget_exceeded("too many events for inclusion-exclusion");
    const int m = static_cast<int>(events.size());
    double total = 0.0;
    // Inclusion-exclusion: P(union) = sum over nonempty subsets S of
    // (-1)^(|S|+1) P(all of S), where an inconsistent union of pairs gives 0.
    std::vector<int> x_to_y(n), y_to_x(n);
    for (std::uint32_t s = 1; s < (std::uint32_t{1} << m); ++s) {
        std::fill(x_to_y.begin(), x_to_y.end(), -1);
        std::fill(y_to_x.begin(), y_to_x.end(), -1);
        int pairs = 0;
        bool consistent = true;
        for (int j = 0; j < m && consistent; ++j) {
            if (!(s >> j & 1)) continue;
            for (auto [x, y] : events[j].pairs()) {
                if (x >= n || y >= n)
                    throw std::invalid_argument("event outside permutation size");
                if (x_to_y[x] == y && y_to_x[y] == x) continue; // shared pair
                if (x_to_y[x] != -1 || y_to_x[y] != -1) {
                    consistent = false;
                    break;
                }
                x_to_y[x] = y;
                y_to_x[y] = x;
                ++pairs;
            }
        }
        if (!consistent) continue;
        double p = 1.0;
        for (int i = 0; i < pairs; ++i) p /= static_cast<double>(n - i);
        total += (std::popcount(s) % 2 == 1) ? p : -p;
    }
    return total;
}

// --- dependency and restriction ---------------------------------------------

bool related(const scoped_event& a, const scoped_event& b) {
    const auto& sa = a.scope();
    const auto& sb = b.scope();
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] == sb[j]) return true;
        if (sa[i] < sb[j]) ++i;
        else ++j;
    }
    return false;
}

bool related(const atomic_perm_event& a, const atomic_perm_event& b) {
    for (auto [x1, y1] : a.pairs())
        for (auto [x2, y2] : b.pairs())
            if (x1 == x2 || y1 == y2) return true;
    return false;
}

std::vector<int> restrict_bad_events(const var_space& space,
                                     std::span<const scoped_event> bad_events,
                                     const scoped_event& e) {
    std::vector<int> kept;
    for (std::size_t i = 0; i < bad_events.size(); ++i) {
        const scoped_event* pos = &bad_events[i];
        const scoped_event* neg = &e;
        // B can still fail e  <=>  P(not-e and B) > 0  <=>  P(e | B) < 1.
        if (joint_probability(space, std::span<const scoped_event* const>(&pos, 1),
                              std::span<const scoped_event* const>(&neg, 1)) > 0.0)
            kept.push_back(static_cast<int>(i));
    }
    return kept;
}

std::vector<int> restrict_bad_events(std::span<const atomic_perm_event> bad_events,
                                     const atomic_perm_event& e) {
    std::vector<int> kept;
    for (std::size_t i = 0; i < bad_events.size(); ++i)
        if (!bad_events[i].contains(e)) kept.push_back(static_cast<int>(i));
    return kept;
}

} // namespace lll
