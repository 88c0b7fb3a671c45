#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/events.hpp"
#include "lll/measure.hpp"

namespace lll {

/// Candidate weights mu_tilde, one per event of a dependency graph.
struct cluster_weights {
    std::vector<double> mu_tilde;
};

struct cluster_check_result {
    bool satisfied = true;
    /// Per-event right-hand side p_B * sum over independent subsets of N(B)
    /// of the weight products; the criterion requires mu_tilde >= required.
    std::vector<double> required;
    int first_failure = -1;
};

/// Checks the cluster-expansion criterion for the given weights, with a
/// 1e-12 absolute tolerance so exact-equality solutions pass.
cluster_check_result check_cluster_expansion(const dep_graph& g, const cluster_weights& w,
                                             const indep_enum_options& opts = {});

struct symmetric_check_result {
    double p = 0.0;  // max event probability
    int d = 0;       // max inclusive neighborhood size
    double epd = 0.0;
    bool satisfied = true;
};

/// Symmetric criterion e * p * d <= 1 (d counts an event as its own
/// neighbor).  When it holds, symmetric_cluster_weights(g) gives weights
/// mu_tilde = e * p_B that satisfy the cluster-expansion criterion.
symmetric_check_result symmetric_criterion(const dep_graph& g);
cluster_weights symmetric_cluster_weights(const dep_graph& g);

struct psi_theta_result {
    double psi = 1.0;
    double theta = 0.0;
};

/// Exact Psi and theta of an external event with probability p_e:
///   Psi = sum of mu(J) over independent J contained in N(e),
///   theta = p_e * Psi,
/// where mu is the exact measure of the subfamily `restriction` (the events
/// that can still fail e) and N(e) is `neighbors` intersected with that
/// subfamily.  Throws criterion_violated if the subfamily's criterion fails.
psi_theta_result psi_theta(const dep_graph& g, double p_e, std::span<const int> neighbors,
                           std::span<const int> restriction, const shearer_options& opts = {});

/// Upper-bound flavor of psi_theta: mu(J) is replaced by the product of
/// cluster weights, so the result dominates the exact one whenever the
/// weights satisfy the cluster-expansion criterion.
psi_theta_result psi_theta(const dep_graph& g, double p_e, std::span<const int> neighbors,
                           std::span<const int> restriction, const cluster_weights& w,
                           const indep_enum_options& opts = {});

/// How the event order of an ordered bound is chosen.
enum class order_policy {
    input,           // use the order the events were given in
    best_exhaustive, // try every order (at most 8 events) and keep the best
};

struct disjunction_bound_result {
    /// sum_j P(A_j and none of A_1..A_{j-1}) * Psi(A_j), in `order`.
    double ordered_bound = 0.0;
    /// P(any A_j) * max_j Psi(A_j): order-free but weaker.
    double corollary_bound = 0.0;
    std::vector<double> psi;   // per target event, input order
    std::vector<int> order;    // the order realizing ordered_bound
};

/// Bound on the probability that the algorithm's output satisfies at least
/// one of `targets`, with Psi taken over the subfamily of bad events that can
/// still fail the disjunction.  Pass `weights` to use cluster weights instead
/// of the exact measure.
disjunction_bound_result disjunction_bound(const var_space& space,
                                           std::span<const scoped_event> targets,
                                           std::span<const scoped_event> bad_events,
                                           const cluster_weights* weights = nullptr,
                                           order_policy policy = order_policy::input);

struct singleton_bound_result {
    double ordered_bound = 0.0;
    double corollary_bound = 0.0;
    double p_a = 0.0;             // probability of the singleton event itself
    std::vector<int> clique;      // bad events of the subfamily sharing a's variable
    std::vector<double> psi;      // Psi of each clique event, same order
};

/// Bound on the probability that a single variable lands in a given value
/// set.  The relevant bad events (those sharing the variable, within the
/// subfamily that can still fail the event) form a clique, which yields both
/// an ordered bound and an order-free corollary; both are at least P(a).
/// Throws not_singleton if `a` touches more than one variable.
singleton_bound_result singleton_bound(const var_space& space, const scoped_event& a,
                                       std::span<const scoped_event> bad_events,
                                       const cluster_weights* weights = nullptr,
                                       order_policy policy = order_policy::input);

} // namespace lll
