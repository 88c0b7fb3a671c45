#pragma once

#include <cstdint>
#include <functional>

#include "lll/rng.hpp"

namespace lll {

/// Wilson score critical values for the two supported confidence levels.
inline constexpr double kZ95 = 1.959963985;
inline constexpr double kZ99 = 2.5758293035489404;

/// Monte Carlo estimate of an event probability with a Wilson score
/// interval.  Deterministic given (seed, trials, instance) and independent
/// of the parallelism degree.
struct estimate {
    long long successes = 0;
    long long trials = 0;
    /// Trials whose runner hit its cutoff instead of terminating; these are
    /// folded into `successes` according to the cutoff policy.
    long long nonterminated = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double level = 0.95;
    std::uint64_t seed = 0;
    double wall_time = 0.0; // seconds, informational only
};

/// What to record for a trial whose runner did not terminate.  Counting it
/// as event-true keeps "P <= bound" verdicts conservative and is the
/// default; counting it as false only drops it from the success count.
enum class cutoff_policy { event_true, event_false };

/// One trial's outcome: whether the probed event held, and whether the
/// underlying run actually terminated.
struct trial_outcome {
    bool event = false;
    bool terminated = true;
};

struct estimate_options {
    double level = 0.95; // 0.95 or 0.99
    int jobs = 1;
    cutoff_policy policy = cutoff_policy::event_true;
};

/// Runs `trials` independent trials; trial i receives the stream derived as
/// (seed, "trial", i) plus its index, so results never depend on scheduling.
estimate run_estimate(const std::function<trial_outcome(rng_stream&, long long)>& trial,
                      long long trials, std::uint64_t seed, const estimate_options& opts = {});

/// Wilson score interval bounds for s successes in t trials.
double wilson_lower(long long successes, long long trials, double z);
double wilson_upper(long long successes, long long trials, double z);

/// Statistical acceptance rule for a "P <= bound" claim: a violation means
/// even the interval's lower end exceeds the bound.
struct verdict_result {
    bool violation = false;
    /// bound - ci_low; negative exactly for violations.
    double margin = 0.0;
};

verdict_result verdict(const estimate& est, double bound);

} // namespace lll
