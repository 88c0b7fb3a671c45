#include <doctest.h>

#include <cmath>
#include <vector>

#include "lll/events.hpp"
#include "lll/mt.hpp"
#include "lll/table.hpp"
#include "lll/witness.hpp"

using lll::scoped_event;

TEST_CASE("run record edges connect exactly the related earlier/later pairs") {
    const scoped_event b1 = scoped_event::conjunction({{0, 1}, {1, 1}});
    const scoped_event b2 = scoped_event::conjunction({{5, 1}});
    const std::vector<scoped_event> events{b1, b2};

    const lll::witness_dag empty = lll::full_witness_dag(std::vector<int>{}, events);
    CHECK(empty.size() == 0);

    const lll::witness_dag twice = lll::full_witness_dag(std::vector<int>{0, 0}, events);
    CHECK(twice.size() == 2);
    CHECK(twice.preds[0].empty());
    CHECK(twice.preds[1] == std::vector<int>{0});

    // b2 shares no variable with b1, so only the two b1 nodes are joined.
    const lll::witness_dag mixed = lll::full_witness_dag(std::vector<int>{0, 1, 0}, events);
    CHECK(mixed.preds[0].empty());
    CHECK(mixed.preds[1].empty());
    CHECK(mixed.preds[2] == std::vector<int>{0});
}

TEST_CASE("projection keeps the nodes with a path to something related") {
    const scoped_event target = scoped_event::equals(2, 0);

    const lll::witness_dag empty;
    const lll::witness_dag root_only = lll::project_dag(empty, target);
    CHECK(root_only.size() == 1);
    CHECK(root_only.root == 0);
    CHECK(root_only.preds[0].empty());

    // A single unrelated node is dropped.
    lll::witness_dag lone;
    lone.labels.push_back(scoped_event::equals(7, 1));
    lone.preds.emplace_back();
    const lll::witness_dag dropped = lll::project_dag(lone, target);
    CHECK(dropped.size() == 1);
    CHECK(dropped.root == 0);

    // Chain v0 -> v1 where only v1 relates to the target: v0 stays relevant
    // through the path, but only v1 gains the edge into the root.
    lll::witness_dag chain;
    chain.labels.push_back(scoped_event::conjunction({{1, 1}}));
    chain.labels.push_back(scoped_event::conjunction({{1, 0}, {2, 1}}));
    chain.preds.emplace_back();
    chain.preds.push_back({0});
    const lll::witness_dag proj = lll::project_dag(chain, target);
    REQUIRE(proj.size() == 3);
    CHECK(proj.root == 2);
    CHECK(proj.preds[1] == std::vector<int>{0});
    CHECK(proj.preds[2] == std::vector<int>{1});
}

TEST_CASE("singleton compatibility reads row one") {
    const lll::var_space space = lll::var_space::uniform_bits(2);
    lll::witness_dag tau;
    tau.labels.push_back(scoped_event::conjunction({{0, 1}, {1, 0}}));
    tau.preds.emplace_back();
    int matches = 0;
    const int trials = 400;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        lll::resampling_table table(space, seed);
        const bool expect =
            table.entry(0, 1) == 1 && table.entry(1, 1) == 0;
        CHECK(lll::compatible(tau, table) == expect);
        matches += expect;
    }
    CHECK(matches > 0);
    CHECK(matches < trials);
}

namespace {

/// Catalog of fixed DAGs whose same-variable nodes all lie on common paths,
/// the shape runs produce; for these, a fresh table is compatible with
/// probability exactly the weight.
std::vector<lll::witness_dag> dag_catalog() {
    using E = scoped_event;
    std::vector<lll::witness_dag> out;

    lll::witness_dag single;
    single.labels.push_back(E::conjunction({{0, 1}, {1, 1}}));
    single.preds.emplace_back();
    out.push_back(single);

    lll::witness_dag chain;
    chain.labels.push_back(E::equals(0, 1));
    chain.labels.push_back(E::conjunction({{0, 1}, {1, 1}}));
    chain.preds.emplace_back();
    chain.preds.push_back({0});
    out.push_back(chain);

    // Two variable-disjoint sources feeding one sink.
    lll::witness_dag vee;
    vee.labels.push_back(E::equals(0, 1));
    vee.labels.push_back(E::equals(1, 1));
    vee.labels.push_back(E::conjunction({{0, 0}, {1, 0}}));
    vee.preds.emplace_back();
    vee.preds.emplace_back();
    vee.preds.push_back({0, 1});
    out.push_back(vee);

    lll::witness_dag triple;
    triple.labels.push_back(E::equals(0, 1));
    triple.labels.push_back(E::equals(0, 1));
    triple.labels.push_back(E::equals(0, 0));
    triple.preds.emplace_back();
    triple.preds.push_back({0});
    triple.preds.push_back({1});
    out.push_back(triple);

    // Diamond: the middle layer is variable-disjoint, everything else chains.
    lll::witness_dag diamond;
    diamond.labels.push_back(E::conjunction({{0, 1}, {1, 1}}));
    diamond.labels.push_back(E::equals(0, 1));
    diamond.labels.push_back(E::equals(1, 1));
    diamond.labels.push_back(E::conjunction({{0, 1}, {1, 1}}));
    diamond.preds.emplace_back();
    diamond.preds.push_back({0});
    diamond.preds.push_back({0});
    diamond.preds.push_back({1, 2});
    out.push_back(diamond);

    return out;
}

} // namespace

TEST_CASE("compatibility frequency matches the weight") {
    const lll::var_space space = lll::var_space::uniform_bits(2);
    const int trials = 100000;
    int which = 0;
    for (const auto& tau : dag_catalog()) {
        const double w = lll::dag_weight(space, tau);
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
            lll::resampling_table table(
                space, 777000u + static_cast<std::uint64_t>(which) * trials + t);
            hits += lll::compatible(tau, table);
        }
        const double freq = static_cast<double>(hits) / trials;
        const double se = std::sqrt(w * (1 - w) / trials);
        CAPTURE(which);
        CHECK(std::abs(freq - w) <= 4 * se);
        ++which;
    }
}

TEST_CASE("every projected run record is compatible with its own table") {
    // Chain instance small enough that runs stay short.
    const lll::var_space space = lll::var_space::uniform_bits(7);
    std::vector<scoped_event> events;
    for (int i = 0; i < 3; ++i)
        events.push_back(
            scoped_event::conjunction({{2 * i, 1}, {2 * i + 1, 1}, {2 * i + 2, 1}}));
    // Extra probes beyond the bad events themselves.
    std::vector<scoped_event> probes = events;
    probes.push_back(scoped_event::equals(3, 1));
    probes.push_back(scoped_event::conjunction({{0, 1}, {6, 1}}));

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        lll::resampling_table table(space, 5000 + seed);
        std::vector<lll::assignment> configs;
        lll::mt_options opts;
        opts.observer = [&](int, int, const lll::assignment& x) { configs.push_back(x); };
        const lll::run_result res = lll::run_mt(space, events, table, opts);
        REQUIRE(res.terminated);
        configs.insert(configs.begin(), [&] {
            lll::assignment init(space.n());
            for (int i = 0; i < space.n(); ++i) init[i] = table.entry(i, 1);
            return init;
        }());

        for (std::size_t t = 0; t < configs.size(); ++t) {
            const std::vector<int> prefix(res.log.begin(), res.log.begin() + t);
            const lll::witness_dag g = lll::full_witness_dag(prefix, events);
            for (const auto& probe : probes) {
                if (!probe.holds(configs[t])) continue;
                CAPTURE(seed);
                CAPTURE(t);
                CHECK(lll::compatible(lll::project_dag(g, probe), table));
            }
        }
    }
}
