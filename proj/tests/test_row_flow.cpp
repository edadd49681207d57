#include <cmath>
#include <map>

#include "doctest.h"

#include "brickwall/row_flow.hpp"
#include "brickwall/stats.hpp"

using namespace brickwall;

namespace {

Atom atom(std::int64_t b, std::int64_t h, std::int64_t num, std::int64_t den) {
    return {b, h, 0.0, Rational(num, den)};
}

BrickLaw law_a() {
    return make_brick_law({atom(1, 2, 1, 2), atom(2, 1, 1, 2)});
}

BrickLaw law_b() {
    return make_brick_law({atom(1, 3, 1, 3), atom(2, 1, 2, 3)});
}

}  // namespace

TEST_CASE("anchoring of the covering brick") {
    // root (2,3) with offset u = 1: bottom [-1,1), top [0,3)
    auto row = RowRealization::anchored(Brick{2, 3}, 0, 1);
    CHECK(row.s[0] == -1);
    CHECK(row.s[1] == 1);
    CHECK(row.t[0] == 0);
    CHECK(row.t[1] == 3);
}

TEST_CASE("psi on a fixed row") {
    // covering brick bottom [-1,1) top [0,3), then (b=2,h=1): bottom [1,3) top [3,4)
    auto row = RowRealization::anchored(Brick{2, 3}, 0, 1);
    row.push_right(Brick{2, 1});

    CHECK(row.psi(0) == 0);
    CHECK(row.psi(2) == 3);  // population of (0,2] is 3
    CHECK(row.psi(1) == 3);  // single ancestor at the brick corner inherits all tops
    CHECK(row.psi(-1) == 0);

    // covering brick bottom [0,2): no right boundary in (0,1], slice dies
    auto row2 = RowRealization::anchored(Brick{2, 3}, 0, 0);
    row2.push_right(Brick{1, 1});
    CHECK(row2.psi(0) == row2.psi(1));
}

TEST_CASE("sampled rows tile and cover the requested span") {
    auto law = law_b();
    Xoshiro256 rng(17, 0);
    for (int rep = 0; rep < 200; ++rep) {
        auto row = sample_row_over(law, -3, 25, rng);
        REQUIRE(row.s.size() == row.t.size());
        REQUIRE(row.s.front() <= -3);
        REQUIRE(row.s.back() > 25);
        for (std::size_t i = 1; i < row.s.size(); ++i) {
            REQUIRE(row.s[i] > row.s[i - 1]);
            REQUIRE(row.t[i] > row.t[i - 1]);
        }
        CHECK(row.t.front() == 0);  // covering brick top-left pins the frame
    }
}

TEST_CASE("covering brick length is bottom-biased") {
    // beta* of law B is {1: 1/5, 2: 4/5}
    auto law = law_b();
    Xoshiro256 rng(23, 0);
    const int n = 1000000;
    int len1 = 0;
    std::map<std::int64_t, int> offsets;
    for (int i = 0; i < n; ++i) {
        auto row = sample_row_over(law, 0, 0, rng);
        const std::int64_t b0 = row.s[1] - row.s[0];
        if (b0 == 1) ++len1;
        if (b0 == 2) ++offsets[-row.s[0]];
    }
    const double p1 = static_cast<double>(len1) / n;
    const double se1 = std::sqrt(0.2 * 0.8 / n);
    CHECK(std::abs(p1 - 0.2) < 3 * se1);

    // offset uniform on {0,1} given b0 = 2
    const double n2 = offsets[0] + offsets[1];
    const double p0 = offsets[0] / n2;
    CHECK(std::abs(p0 - 0.5) < 3 * std::sqrt(0.25 / n2));
}

TEST_CASE("one-step population is a martingale") {
    auto law = law_a();
    Xoshiro256 rng(31, 0);
    const int reps = 200000;
    const std::int64_t n = 100;
    std::vector<double> pops(reps);
    for (int i = 0; i < reps; ++i)
        pops[i] = static_cast<double>(one_step_population(law, n, rng));
    const auto s = stats::summarize(pops);
    CHECK(std::abs(s.mean - static_cast<double>(n)) < 3 * s.stderr_mean);
}

TEST_CASE("one-step variance grows like n sigma^2") {
    auto law = law_a();
    Xoshiro256 rng(37, 0);
    const int reps = 20000;
    const std::int64_t n = 10000;
    std::vector<double> pops(reps);
    for (int i = 0; i < reps; ++i)
        pops[i] = static_cast<double>(one_step_population(law, n, rng));
    const auto s = stats::summarize(pops);
    CHECK(s.variance / static_cast<double>(n) ==
          doctest::Approx(law.sigma_sq()).epsilon(0.05));
}

TEST_CASE("offspring law: one-step population of a single node is the offspring pmf") {
    auto law = BrickLaw::from_bgw(
        Pmf{{0, 0.0, Rational(1, 2)}, {2, 0.0, Rational(1, 2)}});
    Xoshiro256 rng(41, 0);
    const int reps = 200000;
    std::map<std::int64_t, int> counts;
    for (int i = 0; i < reps; ++i) ++counts[one_step_population(law, 1, rng)];
    REQUIRE(counts.size() == 2);  // only 0 and 2 are reachable
    const double p0 = static_cast<double>(counts[0]) / reps;
    CHECK(std::abs(p0 - 0.5) < 3 * std::sqrt(0.25 / reps));
    CHECK(counts[2] + counts[0] == reps);
}

TEST_CASE("flow step: monotone images, absorption, merged deaths") {
    auto law = law_b();
    Xoshiro256 rng(43, 0);
    for (int rep = 0; rep < 500; ++rep) {
        auto st = FlowState::initial({0, 3, 7, 12});
        for (int gen = 0; gen < 12 && !st.all_dead(); ++gen) {
            auto prev = st;
            st = flow_step(st, law, rng);
            REQUIRE(st.endpoints.size() == prev.endpoints.size());
            for (std::size_t i = 1; i < st.endpoints.size(); ++i)
                REQUIRE(st.endpoints[i] >= st.endpoints[i - 1]);
            for (std::size_t i = 0; i < st.slice_count(); ++i) {
                REQUIRE(st.population(i) >= 0);
                if (prev.population(i) == 0) REQUIRE(st.population(i) == 0);
            }
            REQUIRE(st.generation == prev.generation + 1);
        }
    }
}

TEST_CASE("flow consistency: merged endpoints equal the sum of slices") {
    // Same seed, same row consumption: simulating (0,a,b) and (0,b) in
    // lockstep must give total populations equal realization by realization.
    auto law = law_a();
    for (int rep = 0; rep < 200; ++rep) {
        Xoshiro256 rng1(900 + rep, 0), rng2(900 + rep, 0);
        auto fine = FlowState::initial({0, 4, 11});
        auto coarse = FlowState::initial({0, 11});
        for (int gen = 0; gen < 6; ++gen) {
            fine = flow_step(fine, law, rng1);
            coarse = flow_step(coarse, law, rng2);
            REQUIRE(fine.total() == coarse.total());
        }
    }
}

TEST_CASE("shift invariance of slice populations") {
    auto law = law_b();
    Xoshiro256 rng(53, 0);
    const int reps = 20000;
    const std::int64_t n = 50;
    std::vector<double> at0(reps), at17(reps);
    for (int i = 0; i < reps; ++i) {
        auto row0 = sample_row_over(law, 0, n, rng);
        at0[i] = static_cast<double>(row0.psi(n) - row0.psi(0));
        auto row17 = sample_row_over(law, 17, 17 + n, rng);
        at17[i] = static_cast<double>(row17.psi(17 + n) - row17.psi(17));
    }
    auto ks = stats::ks_test_two_sample(at0, at17);
    CHECK(ks.p_value > 0.001);
}
