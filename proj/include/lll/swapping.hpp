#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lll/depgraph.hpp"
#include "lll/events.hpp"
#include "lll/rng.hpp"
#include "lll/selection.hpp"

namespace lll {

/// Bad event for the permutation resampling loop: an atomic permutation
/// event, optionally also requiring at least one of its cells to carry a
/// set mark.  A marked event owns its cells' marks in the sense that
/// resampling it redraws them along with the permutation entries.
struct perm_bad_event {
    atomic_perm_event pairs;
    bool needs_marks = false;
};

/// A family of bad events over permutations of [0, n), plus the Bernoulli
/// parameter of the per-cell marks (ignored when no event uses marks).
struct swap_instance {
    int n = 0;
    std::vector<perm_bad_event> events;
    double mark_prob = 0.0;
};

/// P(B): the permutation factor times mark_prob for each required mark.
double bad_event_probability(const swap_instance& inst, int event);

/// Whether event `event` is true on (pi, marks): all its pairs hold, and for
/// a marked event every cell (x, y) of the pairs has marks[x * n + y] set.
/// `marks` may be empty when the instance uses none.
bool bad_event_holds(const swap_instance& inst, int event, const permutation& pi,
                     std::span<const char> marks);

/// Dependency graph of the instance: the sharing relation on the pairs, with
/// mark-adjusted probabilities.
dep_graph make_dep_graph(const swap_instance& inst);

/// One resampling of `b`: for each pair (x_i, y_i) in ascending order, draw
/// x' uniformly from [n] minus the earlier pairs' positions and swap the
/// entries at x_i and x'.  In strict mode the event must be true on entry
/// (throws event_not_true otherwise).  When `touched` is given, every
/// position whose entry may have moved is appended to it.
void resample_perm_event(permutation& pi, const atomic_perm_event& b, rng_stream& rng,
                         bool strict = false, std::vector<int>* touched = nullptr);

struct swap_snapshot {
    int time = 0;            // 0 is the initial configuration
    std::vector<int> images; // the permutation at that time
    std::vector<char> marks; // cell marks at that time (empty when unused)
};

struct swap_options {
    select_rule rule = select_rule::lowest_index;
    /// Negative derives 1000 * sum of e * P(B) plus slack, as in run_mt.
    long long max_steps = -1;
    /// Keep this many most recent configurations (0: none).
    int snapshot_capacity = 0;
    std::function<bool(const permutation&)> stop;
    std::function<void(int step, int event, const permutation&)> observer;
};

struct swap_run_result {
    permutation final{0};
    std::vector<char> final_marks;        // n*n row-major; empty when unused
    std::vector<int> log;                 // resampled event indices, in order
    std::vector<swap_snapshot> snapshots; // oldest first
    int steps = 0;
    bool terminated = false; // ended with no bad event true
    bool stopped = false;    // ended because the stop predicate fired
};

/// The permutation resampling loop: a uniform initial permutation (and
/// Bernoulli marks), then while some bad event is true, resample one chosen
/// by the rule.  All randomness comes from streams derived from `seed`, so
/// (seed, instance, options) determines the run.
swap_run_result run_swapping(const swap_instance& inst, std::uint64_t seed,
                             const swap_options& opts = {});

} // namespace lll
