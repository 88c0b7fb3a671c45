#pragma once

namespace lll {

/// How the next event to resample is chosen among the currently-true ones.
/// The termination guarantees hold for any rule, so tests can probe
/// rule-independence.
enum class select_rule {
    lowest_index, // deterministic default
    random,       // uniform over the true events, driven by a rule seed
    fifo,         // oldest outstanding true event first
};

} // namespace lll
