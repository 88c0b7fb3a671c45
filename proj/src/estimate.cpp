#include "lll/estimate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lll {

namespace {

double z_for_level(double level) {
    if (level == 0.95) return kZ95;
    if (level == 0.99) return kZ99;
    throw std::invalid_argument("confidence level must be 0.95 or 0.99");
}

} // namespace

double wilson_lower(long long successes, long long trials, double z) {
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / t;
    const double z2 = z * z;
    const double center = p + z2 / (2.0 * t);
    const double margin = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t));
    return std::max(0.0, (center - margin) / (1.0 + z2 / t));
}

double wilson_upper(long long successes, long long trials, double z) {
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / t;
    const double z2 = z * z;
    const double center = p + z2 / (2.0 * t);
    const double margin = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t));
    return std::min(1.0, (center + margin) / (1.0 + z2 / t));
}

estimate run_estimate(const std::function<trial_outcome(rng_stream&, long long)>& trial,
                      long long trials, std::uint64_t seed, const estimate_options& opts) {
    if (!trial) throw std::invalid_argument("trial runner must be callable");
    if (trials < 1) throw std::invalid_argument("at least one trial is required");
    const double z = z_for_level(opts.level);
    const int jobs = std::max(1, opts.jobs);
    const auto start = std::chrono::steady_clock::now();

    // Work-stealing over trial indices.  Every trial derives its own stream
    // from (seed, index), so which worker runs it cannot matter; the merge
    // is a plain sum, so neither can completion order.
    std::atomic<long long> next{0};
    std::vector<long long> hit(jobs, 0), cut(jobs, 0);
    auto worker = [&](int slot) {
        for (;;) {
            const long long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= trials) return;
            rng_stream rng = rng_stream(seed).derive("trial", static_cast<std::uint64_t>(i));
            const trial_outcome out = trial(rng, i);
            if (!out.terminated) {
                ++cut[slot];
                if (opts.policy == cutoff_policy::event_true) ++hit[slot];
            } else if (out.event) {
                ++hit[slot];
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
        for (auto& th : pool) th.join();
    }

    estimate est;
    est.trials = trials;
    est.seed = seed;
    est.level = opts.level;
    for (int j = 0; j < jobs; ++j) {
        est.successes += hit[j];
        est.nonterminated += cut[j];
    }
    est.p_hat = static_cast<double>(est.successes) / static_cast<double>(trials);
    est.ci_low = wilson_lower(est.successes, trials, z);
    est.ci_high = wilson_upper(est.successes, trials, z);
    est.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return est;
}

verdict_result verdict(const estimate& est, double bound) {
    if (!(bound >= 0.0 && bound <= 1.0)) throw std::invalid_argument("bound must lie in [0, 1]");
    verdict_result out;
    out.margin = bound - est.ci_low;
    out.violation = est.ci_low > bound;
    return out;
}

} // namespace lll
