#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lll/depgraph.hpp"

namespace lll {

/// The exact measure induced by a dependency graph: for every independent set
/// I it holds mu(I) = Q(I) / Q(empty), where Q(I) is the alternating sum of
/// probability products over independent supersets of I.  The graph's
/// criterion is satisfied exactly when Q(I) > 0 for every independent I; when
/// it fails, the measure is still returned (satisfied() == false and
/// first_violation() names the earliest offending set in enumeration order),
/// but the mu values are no longer meaningful as bounds.
class measure {
  public:
    double q_empty() const { return q_empty_; }
    bool satisfied() const { return satisfied_; }
    const std::optional<std::vector<int>>& first_violation() const { return first_violation_; }

    /// mu of an independent set; 0 for sets that are not independent.
    double mu(std::span<const int> members) const;
    double mu(std::initializer_list<int> members) const {
        return mu(std::span<const int>(members.begin(), members.size()));
    }
    double mu1(int i) const { return mu({i}); }

    /// Every cached (independent set, mu) pair, keyed by member bitmask.
    const std::unordered_map<std::uint64_t, double>& cache() const { return cache_; }

  private:
    friend measure shearer_measure(const dep_graph&, const struct shearer_options&);

    double q_empty_ = 1.0;
    bool satisfied_ = true;
    std::optional<std::vector<int>> first_violation_;
    std::unordered_map<std::uint64_t, double> cache_; // mask -> mu
};

struct shearer_options {
    /// Cap on the number of independent sets enumerated.
    std::size_t max_sets = std::size_t{1} << 22;
    /// Use exact rational arithmetic when all probabilities are recognizably
    /// rational with small denominators (and the graph is small enough for
    /// big-integer work); otherwise evaluate in double precision.
    bool allow_exact_rational = true;
};

/// Computes Q and mu for every independent set of g (at most 25 events).
/// Internally evaluates the alternating sums through the deletion recursion
/// on the graph's independence polynomial, so tests can cross-check it
/// against the direct definition.
measure shearer_measure(const dep_graph& g, const shearer_options& opts = {});

/// Total weight of all stable-set sequences that start with `start` and have
/// at most `depth` levels: sequences <S1, ..., Sl> with S1 = start, every
/// subsequent level a nonempty independent subset of the union of inclusive
/// neighborhoods of the previous level, weighted by the product of member
/// probabilities over all levels.  Returns 0 if `start` is not independent.
/// Monotone in depth, and bounded by mu(start) whenever the criterion holds.
double stable_seq_weight(const dep_graph& g, std::span<const int> start, int depth,
                         std::size_t max_sequences = std::size_t{1} << 22);

} // namespace lll
