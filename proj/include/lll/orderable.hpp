#pragma once

#include <span>
#include <vector>

#include "lll/bounds.hpp"
#include "lll/depgraph.hpp"
#include "lll/events.hpp"
#include "lll/measure.hpp"

namespace lll {

/// Whether the set Y of atomic permutation events is orderable to `a`:
/// some ordering B_1, ..., B_l of Y admits pairs z_i of `a` with z_i related
/// to B_i but to none of B_1, ..., B_{i-1}.  The empty set is orderable.
/// Y may contain at most kMaxOrderableSize events.
bool is_orderable(std::span<const atomic_perm_event> y, const atomic_perm_event& a);

inline constexpr int kMaxOrderableSize = 12;

/// All independent subsets of `restriction` that are orderable to `a`,
/// as sorted index lists into `events` (the empty set always qualifies).
/// Only neighbors of `a` can appear, so candidates are filtered to them.
std::vector<std::vector<int>> orderable_sets(std::span<const atomic_perm_event> events,
                                             const atomic_perm_event& a,
                                             std::span<const int> restriction,
                                             const indep_enum_options& opts = {});

/// Psi' of `a` over the subfamily `restriction`:
///   Psi' = sum of mu(Y) over Y independent, orderable to `a`,
/// which never exceeds the unrestricted Psi since orderable sets are a subset
/// of the independent neighbor sets.  theta' = p_a * Psi'.  The graph must be
/// index-aligned with `events`; its probabilities may include non-positional
/// factors (e.g. attached marks), which is why p_a is explicit.
psi_theta_result psi_theta_prime(const dep_graph& g,
                                 std::span<const atomic_perm_event> events,
                                 const atomic_perm_event& a, double p_a,
                                 std::span<const int> restriction,
                                 const shearer_options& opts = {});

/// Cluster-weight flavor: mu(Y) is replaced by the product of weights, an
/// upper bound whenever the weights satisfy the cluster-expansion criterion.
psi_theta_result psi_theta_prime(const dep_graph& g,
                                 std::span<const atomic_perm_event> events,
                                 const atomic_perm_event& a, double p_a,
                                 std::span<const int> restriction, const cluster_weights& w,
                                 const indep_enum_options& opts = {});

/// Convenience for a pure permutation family on [0, n): restricts to the
/// events that can still fail `a` and uses the exact measure.
psi_theta_result psi_theta_prime(int n, std::span<const atomic_perm_event> events,
                                 const atomic_perm_event& a,
                                 const shearer_options& opts = {});

/// Bound on the probability that `a` holds at some non-initial step of the
/// run, before `c` has stopped being resampled: p_a * (Psi' - 1) with Psi'
/// taken over the events that can still fail `c`.
double nib_bound(const dep_graph& g, std::span<const atomic_perm_event> events,
                 const atomic_perm_event& a, double p_a, const atomic_perm_event& c,
                 const cluster_weights* weights = nullptr);

/// Pure-permutation convenience of nib_bound.
double nib_bound(int n, std::span<const atomic_perm_event> events,
                 const atomic_perm_event& a, const atomic_perm_event& c,
                 const cluster_weights* weights = nullptr);

struct perm_disjunction_result {
    double bound = 0.0;               // p_union + sum of (theta' - p) excesses
    double p_union = 0.0;             // P(some target holds) initially
    std::vector<double> theta_prime;  // per target, over the joint restriction
};

/// Bound on the probability that the swapping algorithm's output satisfies at
/// least one target: the initial union probability plus each target's chance
/// of appearing non-initially, all measured over the subfamily that can still
/// fail the disjunction.
perm_disjunction_result perm_disjunction_bound(int n,
                                               std::span<const atomic_perm_event> events,
                                               std::span<const atomic_perm_event> targets,
                                               const cluster_weights* weights = nullptr);

} // namespace lll
