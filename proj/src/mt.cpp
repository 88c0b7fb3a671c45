#include "lll/mt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lll/rng.hpp"
#include "truth_tracker.hpp"

namespace lll {

namespace {

long long default_max_steps(const var_space& space,
                            std::span<const scoped_event> bad_events) {
    double expected = 0.0;
    for (const auto& b : bad_events)
        expected += std::numbers::e * event_probability(space, b);
    return 1000 + static_cast<long long>(std::llround(1000.0 * expected));
}

} // namespace

run_result run_mt(const var_space& space, std::span<const scoped_event> bad_events,
                  const resampling_table& table, const mt_options& opts) {
    if (table.n() != space.n())
        throw std::invalid_argument("table and space disagree on variable count");
    const int n = space.n();
    const int m = static_cast<int>(bad_events.size());

    run_result res;
    res.final.resize(n);
    std::vector<int> pos(n, 1); // current table position per variable
    for (int i = 0; i < n; ++i) res.final[i] = table.entry(i, 1);

    std::vector<std::vector<int>> by_var(n);
    for (int e = 0; e < m; ++e)
        for (int v : bad_events[e].scope()) by_var[v].push_back(e);

    detail::truth_tracker tracker(m);
    for (int e = 0; e < m; ++e) tracker.set(e, bad_events[e].holds(res.final));

    const long long max_steps =
        opts.max_steps >= 0 ? opts.max_steps : default_max_steps(space, bad_events);
    rng_stream rule_rng = rng_stream(opts.rule_seed).derive("resample-rule");
    std::vector<int> stamp(m, -1); // last step each event was re-evaluated

    while (true) {
        if (opts.stop && opts.stop(res.final)) {
            res.stopped = true;
            break;
        }
        if (!tracker.any_true()) {
            res.terminated = true;
            break;
        }
        if (res.steps >= max_steps) break;

        const int chosen = tracker.select(opts.rule, rule_rng);
        for (int v : bad_events[chosen].scope()) res.final[v] = table.entry(v, ++pos[v]);
        res.log.push_back(chosen);
        ++res.steps;

        for (int v : bad_events[chosen].scope())
            for (int e : by_var[v]) {
                if (stamp[e] == res.steps) continue;
                stamp[e] = res.steps;
                tracker.set(e, bad_events[e].holds(res.final));
            }
        if (opts.observer) opts.observer(res.steps, chosen, res.final);
    }

    if (res.terminated)
        for (const auto& b : bad_events)
            if (b.holds(res.final))
                throw std::logic_error("terminated run left a bad event true");
    return res;
}

} // namespace lll
