#include "lll/swapping.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lll/errors.hpp"
#include "truth_tracker.hpp"

namespace lll {

double bad_event_probability(const swap_instance& inst, int event) {
    const perm_bad_event& b = inst.events[event];
    double p = perm_event_probability(inst.n, b.pairs);
    // A marked event also needs at least one of its cells marked, an
    // independent 1 - (1-r)^m factor.
    if (b.needs_marks) p *= 1.0 - std::pow(1.0 - inst.mark_prob, b.pairs.size());
    return p;
}

bool bad_event_holds(const swap_instance& inst, int event, const permutation& pi,
                     std::span<const char> marks) {
    const perm_bad_event& b = inst.events[event];
    if (!b.pairs.holds(pi)) return false;
    if (!b.needs_marks) return true;
    for (auto [x, y] : b.pairs.pairs())
        if (marks[static_cast<std::size_t>(x) * inst.n + y]) return true;
    return false;
}

dep_graph make_dep_graph(const swap_instance& inst) {
    const int m = static_cast<int>(inst.events.size());
    std::vector<double> probs;
    probs.reserve(m);
    for (int i = 0; i < m; ++i) probs.push_back(bad_event_probability(inst, i));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (related(inst.events[i].pairs, inst.events[j].pairs)) edges.emplace_back(i, j);
    return dep_graph(std::move(probs), edges);
}

void resample_perm_event(permutation& pi, const atomic_perm_event& b, rng_stream& rng,
                         bool strict, std::vector<int>* touched) {
    if (strict && !b.holds(pi)) throw event_not_true("resampled event is false");
    const int n = pi.size();
    const auto& pairs = b.pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        // Uniform over [n] minus the earlier positions: draw a rank, then
        // shift it past each excluded position at or below it (positions are
        // in ascending order, so one pass suffices).
        int xprime = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
        for (std::size_t k = 0; k < i; ++k)
            if (pairs[k].first <= xprime) ++xprime;
        pi.swap_positions(pairs[i].first, xprime);
        if (touched) {
            touched->push_back(pairs[i].first);
            touched->push_back(xprime);
        }
    }
}

namespace {

long long default_max_steps(const swap_instance& inst) {
    double expected = 0.0;
    for (int i = 0; i < static_cast<int>(inst.events.size()); ++i)
        expected += std::numbers::e * bad_event_probability(inst, i);
    return 1000 + static_cast<long long>(std::llround(1000.0 * expected));
}

} // namespace

swap_run_result run_swapping(const swap_instance& inst, std::uint64_t seed,
                             const swap_options& opts) {
    const int n = inst.n;
    const int m = static_cast<int>(inst.events.size());
    const bool use_marks = [&] {
        for (const auto& e : inst.events)
            if (e.needs_marks) return true;
        return false;
    }();

    swap_run_result res;
    rng_stream init_rng = rng_stream(seed).derive("swap-init");
    res.final = permutation::random(n, init_rng);
    if (use_marks) {
        res.final_marks.assign(static_cast<std::size_t>(n) * n, 0);
        for (auto& cell : res.final_marks) cell = init_rng.next_bernoulli(inst.mark_prob);
    }

    std::vector<std::vector<int>> by_pos(n);
    for (int e = 0; e < m; ++e)
        for (auto [x, y] : inst.events[e].pairs.pairs()) by_pos[x].push_back(e);

    detail::truth_tracker tracker(m);
    for (int e = 0; e < m; ++e)
        tracker.set(e, bad_event_holds(inst, e, res.final, res.final_marks));

    auto snapshot = [&] {
        if (opts.snapshot_capacity <= 0) return;
        if (static_cast<int>(res.snapshots.size()) == opts.snapshot_capacity)
            res.snapshots.erase(res.snapshots.begin());
        res.snapshots.push_back({res.steps, res.final.images(), res.final_marks});
    };
    snapshot();

    const long long max_steps =
        opts.max_steps >= 0 ? opts.max_steps : default_max_steps(inst);
    rng_stream rule_rng = rng_stream(seed).derive("swap-rule");
    std::vector<int> stamp(m, -1);

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
        const perm_bad_event& b = inst.events[chosen];
        rng_stream step_rng =
            rng_stream(seed).derive("swap-step", static_cast<std::uint64_t>(res.steps));

        std::vector<int> touched;
        rng_stream swap_rng = step_rng.derive("swaps");
        resample_perm_event(res.final, b.pairs, swap_rng, false, &touched);
        if (b.needs_marks) {
            rng_stream mark_rng = step_rng.derive("marks");
            for (auto [x, y] : b.pairs.pairs())
                res.final_marks[static_cast<std::size_t>(x) * n + y] =
                    mark_rng.next_bernoulli(inst.mark_prob);
        }
        res.log.push_back(chosen);
        ++res.steps;

        for (int x : touched)
            for (int e : by_pos[x]) {
                if (stamp[e] == res.steps) continue;
                stamp[e] = res.steps;
                tracker.set(e, bad_event_holds(inst, e, res.final, res.final_marks));
            }
        snapshot();
        if (opts.observer) opts.observer(res.steps, chosen, res.final);
    }

    if (res.terminated)
        for (int e = 0; e < m; ++e)
            if (bad_event_holds(inst, e, res.final, res.final_marks))
                throw std::logic_error("terminated run left a bad event true");
    return res;
}

} // namespace lll
