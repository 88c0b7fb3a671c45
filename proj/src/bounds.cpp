#include "lll/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lll/errors.hpp"

namespace lll {

namespace {

constexpr double kClusterTolerance = 1e-12;

/// Sum over independent subsets I of `filter` of prod_{i in I} weight[i]
/// (empty set contributes 1).
double independent_weight_sum(const dep_graph& g, std::span<const int> filter,
                              std::span<const double> weights,
                              const indep_enum_options& opts) {
    double total = 0.0;
    for_each_independent_set(
        g, filter,
        [&](std::span<const int> members) {
            double prod = 1.0;
            for (int v : members) prod *= weights[v];
            total += prod;
        },
        opts);
    return total;
}

std::vector<int> intersect_sorted(std::span<const int> a, std::span<const int> b) {
    std::vector<int> sa(a.begin(), a.end()), sb(b.begin(), b.end()), out;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(out));
    return out;
}

dep_graph induced_subgraph(const dep_graph& g, std::span<const int> vertices) {
    std::vector<double> probs;
    probs.reserve(vertices.size());
    for (int v : vertices) probs.push_back(g.prob(v));
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < vertices.size(); ++a)
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            if (g.adjacent(vertices[a], vertices[b]))
                edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return dep_graph(std::move(probs), edges);
}

} // namespace

cluster_check_result check_cluster_expansion(const dep_graph& g, const cluster_weights& w,
                                             const indep_enum_options& opts) {
    if (static_cast<int>(w.mu_tilde.size()) != g.m())
        throw std::invalid_argument("one weight per event required");
    cluster_check_result result;
    result.required.resize(g.m());
    for (int b = 0; b < g.m(); ++b) {
        auto nbrs = g.neighbors(b);
        result.required[b] =
            g.prob(b) * independent_weight_sum(g, nbrs, w.mu_tilde, opts);
        if (w.mu_tilde[b] < result.required[b] - kClusterTolerance && result.satisfied) {
            result.satisfied = false;
            result.first_failure = b;
        }
    }
    return result;
}

symmetric_check_result symmetric_criterion(const dep_graph& g) {
    symmetric_check_result r;
    for (int i = 0; i < g.m(); ++i) {
        r.p = std::max(r.p, g.prob(i));
        r.d = std::max(r.d, static_cast<int>(g.neighbors(i).size()));
    }
    r.epd = std::exp(1.0) * r.p * static_cast<double>(r.d);
    r.satisfied = r.epd <= 1.0 + kClusterTolerance;
    return r;
}

cluster_weights symmetric_cluster_weights(const dep_graph& g) {
    cluster_weights w;
    w.mu_tilde.reserve(g.m());
    for (int i = 0; i < g.m(); ++i) w.mu_tilde.push_back(std::exp(1.0) * g.prob(i));
    return w;
}

psi_theta_result psi_theta(const dep_graph& g, double p_e, std::span<const int> neighbors,
                           std::span<const int> restriction, const shearer_options& opts) {
    const std::vector<int> family(restriction.begin(), restriction.end());
    const std::vector<int> nbrs = intersect_sorted(neighbors, family);

    // The measure lives on the restricted family, so index into its subgraph.
    std::vector<int> sorted_family = family;
    std::sort(sorted_family.begin(), sorted_family.end());
    dep_graph sub = induced_subgraph(g, sorted_family);
    measure mu = shearer_measure(sub, opts);
    if (!mu.satisfied())
        throw criterion_violated("measure criterion fails on the restricted family");

    std::vector<int> sub_nbrs;
    for (int v : nbrs)
        sub_nbrs.push_back(static_cast<int>(
            std::lower_bound(sorted_family.begin(), sorted_family.end(), v) -
            sorted_family.begin()));

    double psi = 0.0;
    indep_enum_options enum_opts;
    enum_opts.max_sets = opts.max_sets;
    for_each_independent_set(
        sub, sub_nbrs, [&](std::span<const int> members) { psi += mu.mu(members); },
        enum_opts);
    return {psi, p_e * psi};
}

psi_theta_result psi_theta(const dep_graph& g, double p_e, std::span<const int> neighbors,
                           std::span<const int> restriction, const cluster_weights& w,
                           const indep_enum_options& opts) {
    if (static_cast<int>(w.mu_tilde.size()) != g.m())
        throw std::invalid_argument("one weight per event required");
    const std::vector<int> nbrs = intersect_sorted(neighbors, restriction);
    const double psi = independent_weight_sum(g, nbrs, w.mu_tilde, opts);
    return {psi, p_e * psi};
}

namespace {

/// Shared machinery for the ordered bounds: given target events and their
/// Psi values, computes sum_j P(T_j and no earlier T) * Psi_j under a
/// permutation of the targets, optionally minimized over all permutations.
struct ordered_sum_eval {
    const var_space& space;
    std::vector<const scoped_event*> targets;
    std::span<const double> psi;

    double eval(std::span<const int> order) const {
        double total = 0.0;
        std::vector<const scoped_event*> earlier;
        for (int j : order) {
            const scoped_event* t = targets[j];
            total += joint_probability(space, std::span<const scoped_event* const>(&t, 1),
                                       earlier) *
                     psi[j];
            earlier.push_back(t);
        }
        return total;
    }

    std::pair<double, std::vector<int>> best(order_policy policy) const {
        std::vector<int> order(targets.size());
        std::iota(order.begin(), order.end(), 0);
        double value = eval(order);
        if (policy == order_policy::best_exhaustive) {
            if (targets.size() > 8)
                throw budget_exceeded("exhaustive order search supports at most 8 events");
            std::vector<int> perm = order;
            std::sort(perm.begin(), perm.end());
            do {
                const double v = eval(perm);
                if (v < value) {
                    value = v;
                    order = perm;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return {value, order};
    }
};

} // namespace

disjunction_bound_result disjunction_bound(const var_space& space,
                                           std::span<const scoped_event> targets,
                                           std::span<const scoped_event> bad_events,
                                           const cluster_weights* weights,
                                           order_policy policy) {
    disjunction_bound_result result;
    if (targets.empty()) return result;

    // Bad events that can still fail the disjunction: P(B and no A_j) > 0.
    dep_graph g = make_dep_graph(space, bad_events);
    std::vector<const scoped_event*> target_ptrs;
    for (const auto& t : targets) target_ptrs.push_back(&t);
    std::vector<int> restriction;
    for (std::size_t i = 0; i < bad_events.size(); ++i) {
        const scoped_event* b = &bad_events[i];
        if (joint_probability(space, std::span<const scoped_event* const>(&b, 1),
                              target_ptrs) > 0.0)
            restriction.push_back(static_cast<int>(i));
    }

    for (const auto& t : targets) {
        std::vector<int> nbrs;
        for (std::size_t i = 0; i < bad_events.size(); ++i)
            if (related(bad_events[i], t)) nbrs.push_back(static_cast<int>(i));
        const double p_t = event_probability(space, t);
        const psi_theta_result pt =
            weights ? psi_theta(g, p_t, nbrs, restriction, *weights)
                    : psi_theta(g, p_t, nbrs, restriction);
        result.psi.push_back(pt.psi);
    }

    ordered_sum_eval eval{space, target_ptrs, result.psi};
    auto [value, order] = eval.best(policy);
    result.ordered_bound = value;
    result.order = std::move(order);
    result.corollary_bound = any_probability(space, targets) *
                             *std::max_element(result.psi.begin(), result.psi.end());
    return result;
}

singleton_bound_result singleton_bound(const var_space& space, const scoped_event& a,
                                       std::span<const scoped_event> bad_events,
                                       const cluster_weights* weights,
                                       order_policy policy) {
    if (a.scope().size() != 1)
        throw not_singleton("singleton bound requires a single-variable event");
    const int var = a.scope()[0];

    singleton_bound_result result;
    result.p_a = event_probability(space, a);

    dep_graph g = make_dep_graph(space, bad_events);
    std::vector<int> restriction = restrict_bad_events(space, bad_events, a);
    // Events of the subfamily touching a's variable: pairwise related, so
    // independent subsets of them have size at most one.
    for (int i : restriction) {
        const auto& s = bad_events[i].scope();
        if (std::binary_search(s.begin(), s.end(), var)) result.clique.push_back(i);
    }

    std::vector<const scoped_event*> clique_ptrs;
    for (int i : result.clique) {
        std::vector<int> nbrs;
        for (std::size_t k = 0; k < bad_events.size(); ++k)
            if (related(bad_events[k], bad_events[i])) nbrs.push_back(static_cast<int>(k));
        const double p_b = g.prob(i);
        const psi_theta_result pt =
            weights ? psi_theta(g, p_b, nbrs, restriction, *weights)
                    : psi_theta(g, p_b, nbrs, restriction);
        result.psi.push_back(pt.psi);
        clique_ptrs.push_back(&bad_events[i]);
    }

    if (result.clique.empty()) {
        result.ordered_bound = result.corollary_bound = result.p_a;
        return result;
    }

    ordered_sum_eval eval{space, clique_ptrs, result.psi};
    auto [value, order] = eval.best(policy);
    (void)order;
    result.ordered_bound = result.p_a * (1.0 + value);

    std::vector<scoped_event> clique_events;
    for (const auto* b : clique_ptrs) clique_events.push_back(*b);
    result.corollary_bound =
        result.p_a * (1.0 + any_probability(space, clique_events) *
                                *std::max_element(result.psi.begin(), result.psi.end()));
    return result;
}

} // namespace lll
