#include "lll/orderable.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "lll/errors.hpp"

namespace lll {

namespace {

bool pair_related(std::pair<int, int> z, const atomic_perm_event& b) {
    for (auto [x, y] : b.pairs())
        if (z.first == x || z.second == y) return true;
    return false;
}

/// Memoized orderability over subsets of `y`, peeling off the last element:
/// a set is orderable iff some member B can come last -- meaning a pair of
/// `a` relates to B and to nothing else in the set -- with the remainder
/// orderable on its own.  (Earlier witnesses are unconstrained by B, so the
/// recursion is exact.)
class orderable_check {
  public:
    orderable_check(std::span<const atomic_perm_event> y, const atomic_perm_event& a)
        : size_(static_cast<int>(y.size())) {
        rel_masks_.reserve(a.pairs().size());
        for (auto z : a.pairs()) {
            std::uint32_t mask = 0;
            for (int i = 0; i < size_; ++i)
                if (pair_related(z, y[i])) mask |= std::uint32_t{1} << i;
            rel_masks_.push_back(mask);
        }
        memo_.assign(std::size_t{1} << size_, -1);
    }

    bool orderable(std::uint32_t mask) {
        if (mask == 0) return true;
        if (memo_[mask] >= 0) return memo_[mask] != 0;
        bool ok = false;
        for (std::uint32_t rest = mask; rest && !ok; rest &= rest - 1) {
            const std::uint32_t last = rest & (~rest + 1);
            bool witness = false;
            for (std::uint32_t zmask : rel_masks_)
                if ((zmask & mask) == last) {
                    witness = true;
                    break;
                }
            if (witness && orderable(mask ^ last)) ok = true;
        }
        memo_[mask] = ok ? 1 : 0;
        return ok;
    }

  private:
    int size_;
    std::vector<std::uint32_t> rel_masks_;
    std::vector<signed char> memo_;
};

} // namespace

bool is_orderable(std::span<const atomic_perm_event> y, const atomic_perm_event& a) {
    if (y.size() > static_cast<std::size_t>(kMaxOrderableSize))
        throw budget_exceeded("orderability check supports at most 12 events");
    orderable_check check(y, a);
    return check.orderable((std::uint32_t{1} << y.size()) - 1);
}

namespace {

/// Candidate events (neighbors of `a` inside `restriction`, ascending) plus
/// the list of their orderable independent subsets, as candidate positions.
struct orderable_family {
    std::vector<int> candidates;            // indices into the full event list
    std::vector<std::uint32_t> subsets;     // masks over `candidates`
    std::vector<std::vector<int>> members;  // same subsets as sorted index lists
};

orderable_family collect_orderable(std::span<const atomic_perm_event> events,
                                   const atomic_perm_event& a,
                                   std::span<const int> restriction,
                                   const indep_enum_options& opts) {
    orderable_family fam;
    std::vector<int> sorted(restriction.begin(), restriction.end());
    std::sort(sorted.begin(), sorted.end());
    for (int i : sorted)
        if (related(events[i], a)) fam.candidates.push_back(i);
    if (fam.candidates.size() > static_cast<std::size_t>(kMaxOrderableSize))
        throw budget_exceeded("too many neighbors for orderable-set enumeration");

    std::vector<atomic_perm_event> cand_events;
    cand_events.reserve(fam.candidates.size());
    for (int i : fam.candidates) cand_events.push_back(events[i]);
    orderable_check check(cand_events, a);

    // Enumerate independent subsets of the candidates and keep the orderable
    // ones.  Adjacency among candidates is the usual sharing relation.
    const int k = static_cast<int>(fam.candidates.size());
    std::vector<std::uint32_t> adj(k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && related(cand_events[i], cand_events[j]))
                adj[i] |= std::uint32_t{1} << j;

    std::size_t visited = 0;
    std::vector<int> chosen;
    auto emit = [&](std::uint32_t mask) {
        if (++visited > opts.max_sets)
            throw budget_exceeded("orderable-set enumeration exceeds budget");
        if (!check.orderable(mask)) return;
        fam.subsets.push_back(mask);
        std::vector<int> ids;
        for (int i : chosen) ids.push_back(fam.candidates[i]);
        fam.members.push_back(std::move(ids));
    };
    auto rec = [&](auto&& self, int from, std::uint32_t mask) -> void {
        if (opts.max_size >= 0 && static_cast<int>(chosen.size()) >= opts.max_size) return;
        for (int i = from; i < k; ++i) {
            if (adj[i] & mask) continue;
            chosen.push_back(i);
            emit(mask | (std::uint32_t{1} << i));
            self(self, i + 1, mask | (std::uint32_t{1} << i));
            chosen.pop_back();
        }
    };
    emit(0);
    rec(rec, 0, 0);
    return fam;
}

} // namespace

std::vector<std::vector<int>> orderable_sets(std::span<const atomic_perm_event> events,
                                             const atomic_perm_event& a,
                                             std::span<const int> restriction,
                                             const indep_enum_options& opts) {
    return collect_orderable(events, a, restriction, opts).members;
}

psi_theta_result psi_theta_prime(const dep_graph& g,
                                 std::span<const atomic_perm_event> events,
                                 const atomic_perm_event& a, double p_a,
                                 std::span<const int> restriction,
                                 const shearer_options& opts) {
    indep_enum_options enum_opts;
    enum_opts.max_sets = opts.max_sets;
    orderable_family fam = collect_orderable(events, a, restriction, enum_opts);

    std::vector<int> sorted_family(restriction.begin(), restriction.end());
    std::sort(sorted_family.begin(), sorted_family.end());
    std::vector<double> probs;
    probs.reserve(sorted_family.size());
    for (int v : sorted_family) probs.push_back(g.prob(v));
    std::vector<std::pair<int, int>> edges;
    for (std::size_t x = 0; x < sorted_family.size(); ++x)
        for (std::size_t y = x + 1; y < sorted_family.size(); ++y)
            if (g.adjacent(sorted_family[x], sorted_family[y]))
                edges.emplace_back(static_cast<int>(x), static_cast<int>(y));
    dep_graph sub(std::move(probs), edges);
    measure mu = shearer_measure(sub, opts);
    if (!mu.satisfied())
        throw criterion_violated("measure criterion fails on the restricted family");

    double psi = 0.0;
    std::vector<int> sub_ids;
    for (const auto& members : fam.members) {
        sub_ids.clear();
        for (int v : members)
            sub_ids.push_back(static_cast<int>(
                std::lower_bound(sorted_family.begin(), sorted_family.end(), v) -
                sorted_family.begin()));
        psi += mu.mu(sub_ids);
    }
    return {psi, p_a * psi};
}

psi_theta_result psi_theta_prime(const dep_graph& g,
                                 std::span<const atomic_perm_event> events,
                                 const atomic_perm_event& a, double p_a,
                                 std::span<const int> restriction, const cluster_weights& w,
                                 const indep_enum_options& opts) {
    if (static_cast<int>(w.mu_tilde.size()) != g.m())
        throw std::invalid_argument("one weight per event required");
    orderable_family fam = collect_orderable(events, a, restriction, opts);
    double psi = 0.0;
    for (const auto& members : fam.members) {
        double prod = 1.0;
        for (int v : members) prod *= w.mu_tilde[v];
        psi += prod;
    }
    return {psi, p_a * psi};
}

psi_theta_result psi_theta_prime(int n, std::span<const atomic_perm_event> events,
                                 const atomic_perm_event& a, const shearer_options& opts) {
    dep_graph g = make_dep_graph(n, events);
    std::vector<int> restriction = restrict_bad_events(events, a);
    return psi_theta_prime(g, events, a, perm_event_probability(n, a), restriction, opts);
}

double nib_bound(const dep_graph& g, std::span<const atomic_perm_event> events,
                 const atomic_perm_event& a, double p_a, const atomic_perm_event& c,
                 const cluster_weights* weights) {
    std::vector<int> restriction = restrict_bad_events(events, c);
    const psi_theta_result pt =
        weights ? psi_theta_prime(g, events, a, p_a, restriction, *weights)
                : psi_theta_prime(g, events, a, p_a, restriction);
    return p_a * (pt.psi - 1.0);
}

double nib_bound(int n, std::span<const atomic_perm_event> events,
                 const atomic_perm_event& a, const atomic_perm_event& c,
                 const cluster_weights* weights) {
    dep_graph g = make_dep_graph(n, events);
    return nib_bound(g, events, a, perm_event_probability(n, a), c, weights);
}

perm_disjunction_result perm_disjunction_bound(int n,
                                               std::span<const atomic_perm_event> events,
                                               std::span<const atomic_perm_event> targets,
                                               const cluster_weights* weights) {
    perm_disjunction_result result;
    if (targets.empty()) return result;
    result.p_union = perm_any_probability(n, targets);

    // Subfamily that can still fail the disjunction: B survives iff some
    // permutation containing B avoids every target.
    dep_graph g = make_dep_graph(n, events);
    std::vector<int> restriction;
    for (std::size_t i = 0; i < events.size(); ++i) {
        std::vector<atomic_perm_event> with_base{events[i]};
        for (const auto& t : targets) with_base.push_back(t);
        // P(B and some target) vs P(B): equal exactly when no avoiding
        // extension exists.  Compute P(B) - P(B and union) via
        // inclusion-exclusion restricted to subsets containing B.
        const double p_b = perm_event_probability(n, events[i]);
        double p_b_and_union = 0.0;
        const int k = static_cast<int>(targets.size());
        if (k > kMaxUnionEvents)
            throw budget_exceeded("too many targets for inclusion-exclusion");
        for (std::uint32_t s = 1; s < (std::uint32_t{1} << k); ++s) {
            std::vector<std::pair<int, int>> merged = events[i].pairs();
            bool consistent = true;
            for (int j = 0; j < k && consistent; ++j) {
                if (!(s >> j & 1)) continue;
                for (auto pr : targets[j].pairs()) {
                    bool dup = false;
                    for (auto q : merged)
                        if (q == pr) dup = true;
                    if (dup) continue;
                    for (auto q : merged)
                        if (q.first == pr.first || q.second == pr.second) consistent = false;
                    if (!consistent) break;
                    merged.push_back(pr);
                }
            }
            if (!consistent || merged.size() > static_cast<std::size_t>(n)) continue;
            double p = 1.0;
            for (std::size_t t = 0; t < merged.size(); ++t)
                p /= static_cast<double>(n - static_cast<int>(t));
            p_b_and_union += (std::popcount(s) % 2 == 1) ? p : -p;
        }
        if (p_b - p_b_and_union > 0.0) restriction.push_back(static_cast<int>(i));
    }

    result.bound = result.p_union;
    for (const auto& t : targets) {
        const double p_t = perm_event_probability(n, t);
        const psi_theta_result pt =
            weights ? psi_theta_prime(g, events, t, p_t, restriction, *weights)
                    : psi_theta_prime(g, events, t, p_t, restriction);
        result.theta_prime.push_back(pt.theta);
        result.bound += pt.theta - p_t;
    }
    return result;
}

} // namespace lll
