#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lll/rng.hpp"

using lll::rng_stream;

TEST_CASE("identical seeds give identical streams") {
    rng_stream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derivation is independent of sibling usage") {
    rng_stream master(7);
    rng_stream child_before = master.derive("trial", 3);
    master.next_u64(); // consuming from the parent must not perturb children
    rng_stream child_after = rng_stream(7).derive("trial", 3);
    for (int i = 0; i < 20; ++i) CHECK(child_before.next_u64() == child_after.next_u64());
}

TEST_CASE("distinct labels and indices give distinct streams") {
    rng_stream master(7);
    auto a = master.derive("trial", 0);
    auto b = master.derive("trial", 1);
    auto c = master.derive("table", 0);
    const auto va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    CHECK(va != vb);
    CHECK(va != vc);
    CHECK(vb != vc);
}

TEST_CASE("doubles are in the unit interval and roughly uniform") {
    rng_stream rng(123);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("bounded draws are unbiased across residue classes") {
    rng_stream rng(5);
    std::array<int, 6> counts{};
    const int n = 600000;
    for (int i = 0; i < n; ++i) ++counts[rng.next_below(6)];
    for (int c : counts) CHECK(std::abs(c / static_cast<double>(n) - 1.0 / 6) < 0.002);
}

TEST_CASE("categorical draws follow the given distribution") {
    rng_stream rng(99);
    const std::vector<double> probs{0.5, 0.3, 0.2};
    std::array<int, 3> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[rng.next_categorical(probs)];
    for (int v = 0; v < 3; ++v) {
        const double se = std::sqrt(probs[v] * (1 - probs[v]) / n);
        CHECK(std::abs(counts[v] / static_cast<double>(n) - probs[v]) < 4 * se);
    }
}
