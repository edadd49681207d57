#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "brickwall/alias_table.hpp"
#include "brickwall/rng.hpp"

using namespace brickwall;

TEST_CASE("streams are reproducible and distinct") {
    Xoshiro256 a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    int diff = 0;
    for (int i = 0; i < 100; ++i)
        if (b() != c()) ++diff;
    CHECK(diff > 90);
}

TEST_CASE("uniform ranges") {
    Xoshiro256 rng(1, 0);
    double sum = 0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // mean 1/2, sd 1/sqrt(12 n)
    CHECK(std::abs(sum / 200000 - 0.5) < 4.0 / std::sqrt(12.0 * 200000));

    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform_pos();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }

    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("alias table reproduces the pmf") {
    const std::vector<double> w = {0.1, 0.4, 0.25, 0.05, 0.2};
    AliasTable table(w);
    Xoshiro256 rng(99, 3);
    const int n = 500000;
    std::vector<int> counts(w.size(), 0);
    for (int i = 0; i < n; ++i) ++counts[table.sample(rng)];
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double p = w[k];
        const double se = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(static_cast<double>(counts[k]) / n - p) < 4 * se);
    }
}

TEST_CASE("alias table single atom") {
    AliasTable table(std::vector<double>{3.0});
    Xoshiro256 rng(5, 0);
    for (int i = 0; i < 100; ++i) CHECK(table.sample(rng) == 0);
}
