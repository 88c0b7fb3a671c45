#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lll/bounds.hpp"
#include "lll/errors.hpp"
#include "lll/events.hpp"
#include "lll/orderable.hpp"
#include "lll/rng.hpp"
#include "oracles.hpp"

using lll::atomic_perm_event;

namespace {

atomic_perm_event random_perm_event(lll::rng_stream& rng, int n, int size) {
    std::vector<std::pair<int, int>> pairs;
    while (static_cast<int>(pairs.size()) < size) {
        const int x = static_cast<int>(rng.next_below(n));
        const int y = static_cast<int>(rng.next_below(n));
        bool clash = false;
        for (auto [px, py] : pairs)
            if (px == x || py == y) clash = true;
        if (!clash) pairs.emplace_back(x, y);
    }
    return atomic_perm_event(pairs);
}

} // namespace

TEST_CASE("orderability needs a fresh witness pair per event") {
    const atomic_perm_event a({{1, 1}, {2, 2}});
    const atomic_perm_event b1({{1, 3}, {5, 5}});
    const atomic_perm_event b2({{1, 4}, {6, 6}});

    CHECK(lll::is_orderable(std::vector<atomic_perm_event>{}, a));
    CHECK(lll::is_orderable(std::vector{b1}, a));
    CHECK(lll::is_orderable(std::vector{b2}, a));
    // Both events touch `a` only through position 1, and (2, 2) touches
    // neither, so one witness pair cannot serve two events.
    CHECK_FALSE(lll::is_orderable(std::vector{b1, b2}, a));

    // Moving b2 onto position 2 gives each event its own witness.
    const atomic_perm_event b2_far({{2, 4}, {6, 6}});
    CHECK(lll::is_orderable(std::vector{b1, b2_far}, a));
}

TEST_CASE("a witness related to both events can only serve the first") {
    const atomic_perm_event a({{1, 1}});
    const atomic_perm_event by_pos({{1, 2}});
    const atomic_perm_event by_val({{3, 1}});
    CHECK(lll::is_orderable(std::vector{by_pos}, a));
    CHECK(lll::is_orderable(std::vector{by_val}, a));
    // (1, 1) relates to both, so whichever comes second has no fresh witness.
    CHECK_FALSE(lll::is_orderable(std::vector{by_pos, by_val}, a));
}

TEST_CASE("orderability agrees with trying every ordering") {
    lll::rng_stream rng(20240811);
    const int n = 9;
    for (int trial = 0; trial < 40; ++trial) {
        const atomic_perm_event a = random_perm_event(rng, n, 2);
        std::vector<atomic_perm_event> events;
        const int m = 4 + static_cast<int>(rng.next_below(2));
        for (int i = 0; i < m; ++i)
            events.push_back(random_perm_event(rng, n, 1 + static_cast<int>(rng.next_below(2))));
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
            std::vector<atomic_perm_event> subset;
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1) subset.push_back(events[i]);
            CAPTURE(trial);
            CAPTURE(mask);
            CHECK(lll::is_orderable(subset, a) == oracle::orderable_by_orderings(subset, a));
        }
    }
}

TEST_CASE("orderable sets are exactly the independent orderable neighbor subsets") {
    lll::rng_stream rng(77001);
    const int n = 9;
    for (int trial = 0; trial < 25; ++trial) {
        const atomic_perm_event a = random_perm_event(rng, n, 2);
        std::vector<atomic_perm_event> events;
        for (int i = 0; i < 5; ++i)
            events.push_back(random_perm_event(rng, n, 1 + static_cast<int>(rng.next_below(2))));
        std::vector<int> all{0, 1, 2, 3, 4};

        std::vector<std::vector<int>> expected;
        for (std::uint32_t mask = 0; mask < 32; ++mask) {
            std::vector<int> ids;
            std::vector<atomic_perm_event> subset;
            bool neighbors = true, indep = true;
            for (int i = 0; i < 5; ++i) {
                if (!(mask >> i & 1)) continue;
                if (!lll::related(events[i], a)) neighbors = false;
                for (int j : ids)
                    if (lll::related(events[i], events[j])) indep = false;
                ids.push_back(i);
                subset.push_back(events[i]);
            }
            if (neighbors && indep && oracle::orderable_by_orderings(subset, a))
                expected.push_back(ids);
        }
        std::sort(expected.begin(), expected.end());

        std::vector<std::vector<int>> got = lll::orderable_sets(events, a, all);
        std::sort(got.begin(), got.end());
        CAPTURE(trial);
        CHECK(got == expected);
        CHECK(std::find(got.begin(), got.end(), std::vector<int>{}) != got.end());
    }
}

TEST_CASE("restricted psi-prime never exceeds psi") {
    lll::rng_stream rng(5150);
    const int n = 12;
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<atomic_perm_event> events;
        for (int i = 0; i < 5; ++i) events.push_back(random_perm_event(rng, n, 2));
        const atomic_perm_event a = random_perm_event(rng, n, 2);
        const lll::dep_graph g = lll::make_dep_graph(n, events);
        const std::vector<int> restriction = lll::restrict_bad_events(events, a);
        std::vector<int> neighbors;
        for (std::size_t i = 0; i < events.size(); ++i)
            if (lll::related(events[i], a)) neighbors.push_back(static_cast<int>(i));
        const double p_a = lll::perm_event_probability(n, a);

        const lll::psi_theta_result full = lll::psi_theta(g, p_a, neighbors, restriction);
        const lll::psi_theta_result prime = lll::psi_theta_prime(g, events, a, p_a, restriction);
        CAPTURE(trial);
        CHECK(prime.psi >= 1.0);
        CHECK(prime.psi <= full.psi + 1e-12);
        CHECK(prime.theta == doctest::Approx(p_a * prime.psi));

        // Valid cluster weights turn psi-prime into an upper bound.
        const lll::symmetric_check_result sym = lll::symmetric_criterion(g);
        if (!sym.satisfied) continue;
        ++compared;
        const lll::cluster_weights w = lll::symmetric_cluster_weights(g);
        const lll::psi_theta_result upper =
            lll::psi_theta_prime(g, events, a, p_a, restriction, w);
        CHECK(upper.psi >= prime.psi - 1e-12);
    }
    CHECK(compared > 20);
}

TEST_CASE("psi-prime on a single blocking event") {
    // One bad event pi(1) = 2 against the target pi(1) = 1 on four elements:
    // mu of the singleton family is (1/4) / (3/4), so psi' = 1 + 1/3.
    const std::vector<atomic_perm_event> events{atomic_perm_event({{1, 2}})};
    const atomic_perm_event a({{1, 1}});
    const lll::psi_theta_result pt = lll::psi_theta_prime(4, events, a);
    CHECK(pt.psi == doctest::Approx(4.0 / 3.0));
    CHECK(pt.theta == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("non-initial bound scales the psi-prime excess") {
    const std::vector<atomic_perm_event> events{atomic_perm_event({{1, 2}})};
    const atomic_perm_event a({{1, 1}});
    // Against an unrelated stopping event the family survives whole.
    CHECK(lll::nib_bound(4, events, a, atomic_perm_event({{3, 3}})) ==
          doctest::Approx(1.0 / 12.0));
    // Stopping on the bad event itself empties the family: no excess.
    CHECK(lll::nib_bound(4, events, a, events[0]) == doctest::Approx(0.0));
}

TEST_CASE("disjunction bound adds per-target excesses to the union") {
    const std::vector<atomic_perm_event> events{atomic_perm_event({{1, 2}})};
    const std::vector<atomic_perm_event> targets{atomic_perm_event({{1, 1}})};
    const lll::perm_disjunction_result r = lll::perm_disjunction_bound(4, events, targets);
    CHECK(r.p_union == doctest::Approx(0.25));
    REQUIRE(r.theta_prime.size() == 1);
    CHECK(r.theta_prime[0] == doctest::Approx(1.0 / 3.0));
    CHECK(r.bound == doctest::Approx(1.0 / 3.0));

    // No targets: nothing to bound.
    const lll::perm_disjunction_result empty =
        lll::perm_disjunction_bound(4, events, std::vector<atomic_perm_event>{});
    CHECK(empty.bound == 0.0);
    CHECK(empty.p_union == 0.0);

    // Unrelated events contribute no excess, leaving the plain union bound.
    const std::vector<atomic_perm_event> far{atomic_perm_event({{2, 3}})};
    const lll::perm_disjunction_result plain = lll::perm_disjunction_bound(4, far, targets);
    CHECK(plain.bound == doctest::Approx(plain.p_union));
}

TEST_CASE("orderability budgets") {
    const atomic_perm_event a({{0, 0}});
    std::vector<atomic_perm_event> big;
    for (int i = 0; i < 13; ++i) big.push_back(atomic_perm_event({{0, i + 1}}));
    CHECK_THROWS_AS((void)lll::is_orderable(big, a), lll::budget_exceeded);

    std::vector<int> all(big.size());
    for (std::size_t i = 0; i < big.size(); ++i) all[i] = static_cast<int>(i);
    CHECK_THROWS_AS((void)lll::orderable_sets(big, a, all), lll::budget_exceeded);

    const std::vector<atomic_perm_event> small{atomic_perm_event({{0, 1}}),
                                               atomic_perm_event({{1, 0}})};
    const std::vector<int> both{0, 1};
    lll::indep_enum_options tight;
    tight.max_sets = 1;
    CHECK_THROWS_AS((void)lll::orderable_sets(small, a, both, tight), lll::budget_exceeded);
}
