#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lll/events.hpp"
#include "lll/selection.hpp"
#include "lll/table.hpp"

namespace lll {

struct mt_options {
    select_rule rule = select_rule::lowest_index;
    /// Resampling-step budget.  Negative derives 1000 * sum of e * P(B) plus
    /// slack -- a Markov-style cushion over the expected total resamplings.
    long long max_steps = -1;
    /// Stream seed for the random rule (unused by the other rules).
    std::uint64_t rule_seed = 0;
    /// Checked on every configuration, the initial one included, before any
    /// resampling; returning true halts the run with `stopped` set.
    std::function<bool(const assignment&)> stop;
    /// Called after each resampling with the 1-based step count, the index
    /// of the event just resampled, and the new configuration.
    std::function<void(int step, int event, const assignment&)> observer;
};

struct run_result {
    assignment final;        // configuration when the run ended
    std::vector<int> log;    // indices of the resampled events, in order
    int steps = 0;           // log.size()
    bool terminated = false; // ended with no bad event true
    bool stopped = false;    // ended because the stop predicate fired
};

/// The resampling algorithm over an explicit table: start from row 1, and
/// while some bad event holds, pick one by the rule and redraw every variable
/// in its scope from the next position of its row.  Ends as terminated (no
/// true event), stopped (predicate fired; takes precedence), or neither
/// (step budget exhausted).  Truth is re-evaluated incrementally over the
/// events sharing a variable with the resampled one.
run_result run_mt(const var_space& space, std::span<const scoped_event> bad_events,
                  const resampling_table& table, const mt_options& opts = {});

} // namespace lll
