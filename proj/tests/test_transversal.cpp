#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "lll/bounds.hpp"
#include "lll/depgraph.hpp"
#include "lll/errors.hpp"
#include "lll/experiments.hpp"
#include "lll/mt.hpp"
#include "lll/table.hpp"
#include "lll/transversal.hpp"

using lll::block_graph;
using lll::grid_blocks;
using lll::random_block_graph;

TEST_CASE("block_graph validates its partition and edge list") {
    const block_graph g(grid_blocks(2, 3), {{0, 4}, {0, 3}});
    CHECK(g.block_count() == 2);
    CHECK(g.block_size() == 3);
    CHECK(g.vertex_count() == 6);
    CHECK(g.max_degree() == 2); // vertex 0 is on both edges
    CHECK(g.locate(4) == std::pair{1, 1});
    CHECK(g.block_of(2) == 0);
    CHECK(g.has_vertex(5));
    CHECK_FALSE(g.has_vertex(6));
    CHECK_THROWS_AS((void)g.locate(9), std::out_of_range);

    CHECK_THROWS_AS(block_graph({{0, 1}, {2}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(block_graph({{0, 1}, {1, 2}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(block_graph({{0, -1}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(block_graph(grid_blocks(2, 2), {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(block_graph(grid_blocks(2, 2), {{0, 2}, {2, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(block_graph(grid_blocks(2, 2), {{0, 7}}), std::invalid_argument);
}

TEST_CASE("transversal predicates check membership and independence") {
    const block_graph g(grid_blocks(3, 2), {{0, 2}, {3, 4}});
    CHECK(lll::is_transversal(g, {1, 2, 4}));
    CHECK_FALSE(lll::is_transversal(g, {1, 2}));       // wrong length
    CHECK_FALSE(lll::is_transversal(g, {2, 1, 4}));    // swapped blocks
    CHECK_FALSE(lll::is_transversal(g, {1, 9, 4}));    // unknown id
    CHECK(lll::is_independent_transversal(g, {1, 2, 4}));
    CHECK_FALSE(lll::is_independent_transversal(g, {0, 2, 5})); // edge (0,2) inside
}

TEST_CASE("to_lll_instance maps cross edges and drops intra-block ones") {
    block_graph g({{0, 1, 2}, {3, 4, 5}}, {{0, 4}, {1, 2}});
    const auto inst = lll::to_lll_instance(g);
    CHECK(inst.space.n() == 2);
    CHECK(inst.space.domain(0) == 3);
    REQUIRE(inst.bad_events.size() == 1); // (1,2) lives inside block 0
    CHECK(inst.dropped_intra_block == 1);
    CHECK(inst.event_edges[0] == std::pair{0, 4});
    CHECK(lll::event_probability(inst.space, inst.bad_events[0]) ==
          doctest::Approx(1.0 / 9));

    const auto edgeless = lll::to_lll_instance(block_graph(grid_blocks(2, 4), {}));
    CHECK(edgeless.bad_events.empty());

    CHECK_THROWS_AS((void)lll::to_lll_instance(block_graph({}, {})), std::invalid_argument);
}

TEST_CASE("to_transversal decodes assignments and rejects bad values") {
    const block_graph g(grid_blocks(2, 3), {});
    CHECK(lll::to_transversal(g, {2, 0}) == lll::transversal{2, 3});
    CHECK_THROWS_AS((void)lll::to_transversal(g, {0}), std::invalid_argument);
    CHECK_THROWS_AS((void)lll::to_transversal(g, {0, 3}), std::invalid_argument);
}

TEST_CASE("terminated runs always produce independent transversals") {
    // Smallest interesting case: one cross edge, so the only bad event is
    // picking both its endpoints; termination must rule that out.
    const block_graph tiny(grid_blocks(2, 2), {{0, 2}});
    auto inst = lll::to_lll_instance(tiny);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        lll::resampling_table table(inst.space, seed);
        const auto res = lll::run_mt(inst.space, inst.bad_events, table);
        REQUIRE(res.terminated);
        const auto t = lll::to_transversal(tiny, res.final);
        CHECK_FALSE((t[0] == 0 && t[1] == 2));
        CHECK(lll::is_independent_transversal(tiny, t));
    }

    const block_graph g = random_block_graph(5, 8, 2, 300, 42);
    auto big = lll::to_lll_instance(g);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        lll::resampling_table table(big.space, seed);
        const auto res = lll::run_mt(big.space, big.bad_events, table);
        REQUIRE(res.terminated);
        CHECK(lll::is_independent_transversal(g, lll::to_transversal(g, res.final)));
    }
}

TEST_CASE("alpha_cluster evaluates the closed form") {
    CHECK(lll::alpha_cluster(4, 1) == doctest::Approx(0.25));
    CHECK(lll::alpha_cluster(8, 2) == doctest::Approx(0.0625));
    CHECK(lll::alpha_cluster(10, 2) == doctest::Approx(0.019098300562505256).epsilon(1e-12));
    CHECK_THROWS_AS((void)lll::alpha_cluster(7, 2), lll::subcritical_block_size);
    CHECK_THROWS_AS((void)lll::alpha_cluster(4, 0), std::invalid_argument);
}

TEST_CASE("alpha_cluster is the exact fixed point of its criterion") {
    // alpha solves alpha = (1/b^2)(1 + b*delta*alpha)^2, the worst-case
    // cluster requirement when every block meets b*delta edges.
    for (auto [b, d] : std::vector<std::pair<int, int>>{{4, 1}, {8, 2}, {10, 2}, {21, 5}}) {
        CAPTURE(b);
        const double a = lll::alpha_cluster(b, d);
        const double rhs = (1.0 / (b * static_cast<double>(b))) *
                           (1.0 + b * static_cast<double>(d) * a) *
                           (1.0 + b * static_cast<double>(d) * a);
        CHECK(a == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("uniform alpha passes the cluster-expansion check on real instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CAPTURE(seed);
        const block_graph g = random_block_graph(4, 8, 2, 200, seed);
        const auto inst = lll::to_lll_instance(g);
        if (inst.bad_events.empty()) continue;
        const auto dep = lll::make_dep_graph(inst.space, inst.bad_events);
        const int delta = std::max(g.max_degree(), 1);
        const lll::cluster_weights w{std::vector<double>(
            inst.bad_events.size(), lll::alpha_cluster(g.block_size(), delta))};
        const auto check = lll::check_cluster_expansion(dep, w);
        CHECK(check.satisfied);
    }
}

TEST_CASE("avoidance_bound dispatches on the block-to-degree ratio") {
    // b = 10 >= 4.5 * 2: the ratio form alone.
    const auto large = lll::avoidance_bound(10, 2, 5);
    CHECK(large.large_regime);
    CHECK(large.bound == doctest::Approx(0.5801787282954641).epsilon(1e-12));
    CHECK(large.bound == large.ratio_form);

    // 4 * 5 <= 21 < 4.5 * 5: max of both forms, here the exponential one.
    const auto small = lll::avoidance_bound(21, 5, 10);
    CHECK_FALSE(small.large_regime);
    CHECK(small.used_exp_form);
    CHECK(small.ratio_form == doctest::Approx(0.5987952815109528).epsilon(1e-12));
    CHECK(small.exp_form == doctest::Approx(0.621982069744776).epsilon(1e-12));
    CHECK(small.bound == small.exp_form);

    CHECK(lll::avoidance_bound(10, 2, 0).bound == 0.0);
    CHECK(lll::avoidance_bound(9, 2, 3).large_regime); // 2b = 18 >= 9*2 exactly

    CHECK_THROWS_AS((void)lll::avoidance_bound(10, 2, 10), lll::out_of_range_error);
    CHECK_THROWS_AS((void)lll::avoidance_bound(7, 2, 1), lll::subcritical_block_size);
    CHECK_THROWS_AS((void)lll::avoidance_bound(10, 2, -1), std::invalid_argument);
}

TEST_CASE("avoidance_bound grows with the avoided-set size") {
    for (auto [b, d] : std::vector<std::pair<int, int>>{{10, 2}, {21, 5}, {9, 2}, {40, 8}}) {
        CAPTURE(b);
        double prev = 0.0;
        for (int l = 0; l < b; ++l) {
            const auto res = lll::avoidance_bound(b, d, l);
            CHECK(res.bound >= prev);
            // The ratio form stays meaningful up to l = b - 1; the
            // exponential form may pass 1 (vacuously true) near l = b.
            CHECK(res.ratio_form < 1.0);
            prev = res.bound;
        }
    }
}

TEST_CASE("empirical avoidance stays under the bound") {
    const block_graph g = random_block_graph(6, 10, 2, 400, 7);
    REQUIRE(g.max_degree() == 2);
    const auto inst = lll::to_lll_instance(g);
    // L inside one block, and L spread over distinct blocks.
    const std::vector<std::vector<int>> avoid_sets = {{0, 1, 2}, {3, 12, 25, 31}};
    for (const auto& avoid : avoid_sets) {
        CAPTURE(avoid.size());
        const int runs = 3000;
        int hits = 0;
        for (std::uint64_t seed = 0; seed < runs; ++seed) {
            lll::resampling_table table(inst.space, seed);
            const auto res = lll::run_mt(inst.space, inst.bad_events, table);
            REQUIRE(res.terminated);
            const auto t = lll::to_transversal(g, res.final);
            for (int v : avoid)
                if (std::find(t.begin(), t.end(), v) != t.end()) {
                    ++hits;
                    break;
                }
        }
        const double p = static_cast<double>(hits) / runs;
        const double se = std::sqrt(p * (1.0 - p) / runs);
        const double bound =
            lll::avoidance_bound(10, 2, static_cast<int>(avoid.size())).bound;
        CHECK(p - 4.0 * se <= bound);
    }
}

TEST_CASE("find_avoiding_transversal returns a disjoint transversal") {
    const block_graph g = random_block_graph(4, 10, 2, 300, 11);
    const std::vector<int> avoid = {0, 1, 2, 3, 4};

    const auto res = lll::find_avoiding_transversal(g, avoid);
    CHECK(res.precondition_ok);
    CHECK(lll::is_independent_transversal(g, res.chosen));
    for (int v : avoid)
        CHECK(std::find(res.chosen.begin(), res.chosen.end(), v) == res.chosen.end());

    // Empty avoid set: the first terminating run wins.
    CHECK(lll::find_avoiding_transversal(g, {}).runs == 1);

    // Expected restarts are geometric with success rate >= 1 - 0.58, so 200
    // independent searches make even a handful of failures astronomical.
    int total_runs = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        lll::avoid_options opts;
        opts.seed = seed;
        total_runs += lll::find_avoiding_transversal(g, avoid, opts).runs;
    }
    CHECK(total_runs < 200 * 4);
}

TEST_CASE("find_avoiding_transversal rejects impossible or invalid sets") {
    const block_graph g(grid_blocks(3, 2), {{0, 3}});
    CHECK_THROWS_AS((void)lll::find_avoiding_transversal(g, {2, 3}),
                    lll::out_of_range_error); // whole block banned
    CHECK_THROWS_AS((void)lll::find_avoiding_transversal(g, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS((void)lll::find_avoiding_transversal(g, {17}), std::out_of_range);

    // b below the corollary threshold: flagged but still attempted.
    const block_graph narrow = random_block_graph(3, 8, 2, 100, 3);
    const auto res = lll::find_avoiding_transversal(narrow, {0});
    CHECK_FALSE(res.precondition_ok); // 8 < 4.30026 * 2
    CHECK(lll::is_independent_transversal(narrow, res.chosen));
}

TEST_CASE("restart cap raises after persistent misses") {
    // A graph with a single block forces a unique choice-per-run world where
    // avoiding vertex 0 fails whenever it is sampled; with b = 2 the failure
    // rate is 1/2 per run, so max_restarts = 1 fails often across seeds.
    const block_graph g(grid_blocks(1, 2), {});
    lll::avoid_options opts;
    opts.max_restarts = 1;
    int exhausted = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        opts.seed = seed;
        try {
            (void)lll::find_avoiding_transversal(g, {0}, opts);
        } catch (const lll::restarts_exhausted&) {
            ++exhausted;
        }
    }
    CHECK(exhausted > 5);
    CHECK(exhausted < 35);
}

TEST_CASE("JSON loader round-trips instances and reports bad input") {
    const std::string text = R"({
        "blocks": [[0, 1], [2, 3]],
        "edges": [[0, 2], [1, 3]],
        "avoid": [1]
    })";
    const auto req = lll::load_transversal_json(text);
    CHECK(req.graph.block_count() == 2);
    CHECK(req.graph.edges().size() == 2);
    CHECK(req.avoid == std::vector<int>{1});

    const auto no_avoid = lll::load_transversal_json(R"({"blocks": [[0]], "edges": []})");
    CHECK(no_avoid.avoid.empty());

    auto line_of = [](const std::string& bad) {
        try {
            (void)lll::load_transversal_json(bad);
        } catch (const lll::parse_error& e) {
            return e.line;
        }
        return -1;
    };
    CHECK(line_of("{\n  \"blocks\": oops\n}") == 2);             // malformed JSON
    CHECK(line_of(R"({"edges": []})") == 1);                     // missing key
    CHECK(line_of(R"({"blocks": [[0]], "edges": [[0]]})") == 1); // not a pair
    CHECK(line_of(R"({"blocks": [[0], [0]], "edges": []})") == 1); // bad partition
}
