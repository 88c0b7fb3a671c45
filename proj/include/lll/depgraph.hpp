#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "lll/events.hpp"

namespace lll {

/// Dependency graph over a family of bad events: vertex i carries the event
/// probability probs[i] (< 1), and adjacency is a symmetric relation that
/// always includes the diagonal (every event depends on itself, matching the
/// inclusive neighborhoods the bounds are stated with).
class dep_graph {
  public:
    dep_graph(std::vector<double> probs, std::span<const std::pair<int, int>> edges);

    int m() const { return static_cast<int>(probs_.size()); }
    double prob(int i) const { return probs_[i]; }
    bool adjacent(int i, int j) const {
        return (rows_[i][static_cast<std::size_t>(j) >> 6] >> (j & 63)) & 1;
    }

    /// Inclusive neighborhood of i as a bitmask; only valid when m() <= 64.
    std::uint64_t neighbor_mask64(int i) const;

    /// Neighbors of i including i itself, ascending.
    std::vector<int> neighbors(int i) const;

    /// True when no two distinct members are adjacent.
    bool is_independent(std::span<const int> members) const;

  private:
    std::vector<double> probs_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

/// Dependency graph of a variable-setting instance: canonical adjacency is
/// scope intersection, probabilities are exact.
dep_graph make_dep_graph(const var_space& space, std::span<const scoped_event> events);

/// Dependency graph of a permutation-setting instance: adjacency is sharing a
/// position or a value.
dep_graph make_dep_graph(int n, std::span<const atomic_perm_event> events);

struct indep_enum_options {
    /// Abort (budget_exceeded) after visiting this many sets.
    std::size_t max_sets = std::size_t{1} << 22;
    /// Only enumerate sets up to this size; -1 means unbounded, in which case
    /// the filtered vertex count must stay small enough to enumerate.
    int max_size = -1;
};

/// Visits every independent subset of `filter` exactly once (the empty set
/// first, then depth-first in ascending vertex order).  Members are reported
/// as original vertex indices, ascending.
void for_each_independent_set(const dep_graph& g, std::span<const int> filter,
                              const std::function<void(std::span<const int>)>& visit,
                              const indep_enum_options& opts = {});

/// Materialized version of for_each_independent_set.
std::vector<std::vector<int>> independent_sets(const dep_graph& g, std::span<const int> filter,
                                               const indep_enum_options& opts = {});

} // namespace lll
