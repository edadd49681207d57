#include <cmath>
#include <vector>

#include "doctest.h"

#include "brickwall/errors.hpp"
#include "brickwall/rng.hpp"
#include "brickwall/stats.hpp"

using namespace brickwall;

TEST_CASE("kolmogorov distribution reference values") {
    // P(K <= 1.0) = 0.73000 to five digits; monotone tail.
    CHECK(stats::kolmogorov_q(1.0) == doctest::Approx(0.26999967).epsilon(1e-5));
    CHECK(stats::kolmogorov_q(0.5) > stats::kolmogorov_q(1.0));
    CHECK(stats::kolmogorov_q(2.0) < 1e-3);
}

TEST_CASE("normal quantile") {
    CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("one-sample KS is calibrated under the null") {
    int rejections = 0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t) {
        Xoshiro256 rng(1000 + t, 0);
        std::vector<double> u(10000);
        for (auto& v : u) v = rng.uniform();
        auto r = stats::ks_test(u, [](double x) {
            return x < 0 ? 0.0 : (x > 1 ? 1.0 : x);
        });
        if (r.p_value <= 0.001) ++rejections;
    }
    CHECK(rejections <= 3);  // nominal 0.3 expected
}

TEST_CASE("one-sample KS detects a gross misfit") {
    Xoshiro256 rng(77, 0);
    std::vector<double> x(10000);
    for (auto& v : x) v = -std::log(rng.uniform_pos());  // Exp(1)
    auto r = stats::ks_test(x, [](double t) { return stats::exponential_cdf(t, 2.0); });
    CHECK(r.p_value < 1e-6);
}

TEST_CASE("two-sample KS agrees with one-sample on a large reference") {
    Xoshiro256 rng(32, 0);
    auto draw_normal = [&rng]() {
        return std::sqrt(-2.0 * std::log(rng.uniform_pos())) *
               std::cos(2.0 * M_PI * rng.uniform());
    };
    std::vector<double> sample(5000), reference(200000);
    for (auto& v : sample) v = draw_normal();
    for (auto& v : reference) v = draw_normal();

    auto two = stats::ks_test_two_sample(sample, reference);
    auto one = stats::ks_test(sample, [](double x) { return stats::normal_cdf(x); });
    CHECK(two.p_value > 0.01);
    CHECK(one.p_value > 0.01);

    for (auto& v : sample) v += 0.2;  // clear shift: both must reject
    auto two_bad = stats::ks_test_two_sample(sample, reference);
    auto one_bad = stats::ks_test(sample, [](double x) { return stats::normal_cdf(x); });
    CHECK(two_bad.p_value < 1e-4);
    CHECK(one_bad.p_value < 1e-4);
}

TEST_CASE("KS refuses tiny samples") {
    std::vector<double> x(10, 0.5);
    CHECK_THROWS_AS(stats::ks_test(x, [](double) { return 0.5; }), TooFewSamples);
}

TEST_CASE("two-sample chi-square") {
    Xoshiro256 rng(5, 0);
    const std::vector<double> p = {0.3, 0.3, 0.2, 0.15, 0.05};
    auto draw_counts = [&rng, &p](int n, const std::vector<double>& q) {
        std::vector<double> counts(q.size(), 0.0);
        for (int i = 0; i < n; ++i) {
            double u = rng.uniform(), acc = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) {
                acc += q[k];
                if (u < acc || k + 1 == q.size()) {
                    counts[k] += 1;
                    break;
                }
            }
        }
        return counts;
    };

    auto a = draw_counts(20000, p);
    auto b = draw_counts(20000, p);
    CHECK(stats::chi2_two_sample(a, b).p_value > 0.001);

    const std::vector<double> q = {0.25, 0.3, 0.2, 0.15, 0.1};
    auto c = draw_counts(20000, q);
    CHECK(stats::chi2_two_sample(a, c).p_value < 1e-4);
}

TEST_CASE("intervals") {
    auto ci = stats::wilson_ci(50, 100, 0.99);
    CHECK(ci.lo < 0.5);
    CHECK(ci.hi > 0.5);
    CHECK(ci.lo > 0.3);
    CHECK(ci.hi < 0.7);

    stats::Summary s;
    s.n = 100;
    s.mean = 1.0;
    s.variance = 4.0;
    s.stderr_mean = 0.2;
    auto nci = stats::normal_ci(s, 0.99);
    CHECK(nci.lo == doctest::Approx(1.0 - 2.5758 * 0.2).epsilon(1e-3));
    CHECK(nci.overlaps(stats::Interval{1.4, 2.0}));
    CHECK(!nci.overlaps(stats::Interval{2.0, 3.0}));
}

TEST_CASE("slope through origin") {
    std::vector<double> x = {1, 2, 3, 4};
    std::vector<double> y = {2.1, 3.9, 6.0, 8.1};
    CHECK(stats::slope_through_origin(x, y) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("proportion z-test") {
    CHECK(stats::proportion_z_test(500, 1000, 510, 1000) > 0.05);
    CHECK(stats::proportion_z_test(400, 1000, 600, 1000) < 1e-6);
}
