#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "lll/errors.hpp"
#include "lll/measure.hpp"
#include "lll/rng.hpp"
#include "oracles.hpp"

using namespace lll;

namespace {

struct graph_case {
    dep_graph g;
    std::vector<std::vector<bool>> adj;
    std::vector<double> probs;
};

graph_case random_case(rng_stream& rng, int m, double edge_prob, double max_prob,
                       bool rational_probs) {
    std::vector<double> probs(m);
    for (double& p : probs) {
        p = 0.05 + rng.next_double() * (max_prob - 0.05);
        if (rational_probs) p = std::round(p * 100.0) / 100.0;
    }
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (rng.next_double() < edge_prob) {
                edges.emplace_back(i, j);
                adj[i][j] = adj[j][i] = true;
            }
    dep_graph g(probs, edges);
    return {std::move(g), std::move(adj), std::move(probs)};
}

} // namespace

TEST_CASE("two adjacent events at p=0.2 have mu = 1/3") {
    dep_graph g({0.2, 0.2}, std::vector<std::pair<int, int>>{{0, 1}});
    measure mu = shearer_measure(g);
    CHECK(mu.satisfied());
    CHECK(mu.q_empty() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(mu.mu1(0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(mu.mu({}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mu.mu({0, 1}) == 0.0); // not independent
}

TEST_CASE("two non-adjacent events behave as isolated ones") {
    dep_graph g({0.2, 0.2}, {});
    measure mu = shearer_measure(g);
    CHECK(mu.mu1(0) == doctest::Approx(0.25).epsilon(1e-12)); // p/(1-p)
    CHECK(mu.mu({0, 1}) == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("a single self-dependent event at p=1/2 has mu = 1") {
    dep_graph g({0.5}, {});
    measure mu = shearer_measure(g);
    CHECK(mu.satisfied());
    CHECK(mu.mu1(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("criterion failure is reported but the measure is still returned") {
    // A triangle at p = 0.4: Q(empty) = 1 - 3p = -0.2 < 0.
    dep_graph g({0.4, 0.4, 0.4},
                std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}});
    measure mu = shearer_measure(g);
    CHECK(!mu.satisfied());
    REQUIRE(mu.first_violation().has_value());
    CHECK(mu.first_violation()->empty()); // the empty set is checked first
    CHECK(mu.q_empty() == doctest::Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("measure agrees with the alternating-sum definition") {
    rng_stream rng(20240825);
    for (int trial = 0; trial < 120; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_below(7));
        // Alternate between hundredth-rounded probabilities (exercising the
        // exact rational path) and raw doubles (the floating path).
        auto c = random_case(rng, m, 0.45, 0.3, trial % 2 == 0);
        measure mu = shearer_measure(c.g);
        const double q_empty = oracle::q_signed_sum(c.adj, c.probs, 0);
        CHECK(mu.q_empty() == doctest::Approx(q_empty).epsilon(1e-10));
        for (std::uint32_t mask : oracle::independent_masks(c.adj)) {
            std::vector<int> members;
            for (int v = 0; v < m; ++v)
                if (mask >> v & 1) members.push_back(v);
            const double q = oracle::q_signed_sum(c.adj, c.probs, mask);
            if (q_empty > 0.0)
                CHECK(mu.mu(members) == doctest::Approx(q / q_empty).epsilon(1e-9));
        }
    }
}

TEST_CASE("satisfied flag matches the sign of every alternating sum") {
    rng_stream rng(5551);
    int unsatisfied_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto c = random_case(rng, 5, 0.6, 0.45, false);
        measure mu = shearer_measure(c.g);
        bool all_positive = true;
        for (std::uint32_t mask : oracle::independent_masks(c.adj))
            if (oracle::q_signed_sum(c.adj, c.probs, mask) <= 0.0) all_positive = false;
        CHECK(mu.satisfied() == all_positive);
        if (!all_positive) ++unsatisfied_seen;
    }
    CHECK(unsatisfied_seen > 0); // the probabilities were chosen to hit both cases
}

TEST_CASE("truncated sequence sums match direct sequence enumeration") {
    rng_stream rng(808);
    for (int trial = 0; trial < 25; ++trial) {
        auto c = random_case(rng, 4, 0.5, 0.25, false);
        for (std::uint32_t start : oracle::independent_masks(c.adj)) {
            std::vector<int> members;
            for (int v = 0; v < 4; ++v)
                if (start >> v & 1) members.push_back(v);
            for (int depth = 1; depth <= 4; ++depth) {
                CHECK(stable_seq_weight(c.g, members, depth) ==
                      doctest::Approx(oracle::stable_seq_weight_enum(c.adj, c.probs, start,
                                                                     depth))
                          .epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("self-dependent event at p=1/2: depth-3 sequences sum to 7/8") {
    dep_graph g({0.5}, {});
    CHECK(stable_seq_weight(g, std::vector<int>{0}, 1) == doctest::Approx(0.5));
    CHECK(stable_seq_weight(g, std::vector<int>{0}, 2) == doctest::Approx(0.75));
    CHECK(stable_seq_weight(g, std::vector<int>{0}, 3) == doctest::Approx(0.875));
}

TEST_CASE("sequence sums grow with depth but stay below mu") {
    rng_stream rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        auto c = random_case(rng, 5, 0.4, 0.15, false);
        measure mu = shearer_measure(c.g);
        if (!mu.satisfied()) continue;
        for (int v = 0; v < 5; ++v) {
            std::vector<int> start{v};
            double prev = 0.0;
            for (int depth = 1; depth <= 6; ++depth) {
                const double w = stable_seq_weight(c.g, start, depth);
                CHECK(w >= prev - 1e-12);
                CHECK(w <= mu.mu1(v) + 1e-9);
                prev = w;
            }
        }
    }
}

TEST_CASE("sequence sums reject bad inputs") {
    dep_graph g({0.2, 0.2}, std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(stable_seq_weight(g, std::vector<int>{0, 1}, 3) == 0.0); // not independent
    CHECK_THROWS_AS(stable_seq_weight(g, std::vector<int>{0}, 11), budget_exceeded);
    CHECK(stable_seq_weight(g, std::vector<int>{}, 1) == doctest::Approx(1.0));
}

TEST_CASE("graphs beyond the exact-measure size are rejected") {
    std::vector<double> probs(26, 0.01);
    dep_graph g(probs, {});
    CHECK_THROWS_AS(shearer_measure(g), budget_exceeded);
}
