#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"

#include "brickwall/kernels.hpp"
#include "brickwall/rng.hpp"
#include "brickwall/stats.hpp"

using namespace brickwall;

namespace {

// Runs fn under both backends and returns the two outputs.
template <typename Fn>
std::pair<std::vector<double>, std::vector<double>> both_backends(std::size_t n,
                                                                  Fn fn) {
    std::vector<double> a(n, 0.0), b(n, 0.0);
    kern::set_backend(kern::Backend::scalar);
    fn(a.data());
    kern::set_backend(kern::Backend::avx2);
    fn(b.data());
    kern::set_backend(kern::Backend::avx2);
    return {a, b};
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("log and cosine match libm") {
    Xoshiro256 rng(11, 0);
    double max_log_rel = 0.0, max_cos_abs = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform_pos();
        const double l = kern::log_u01(u);
        if (u < 1.0)
            max_log_rel = std::max(max_log_rel,
                                   std::abs(l - std::log(u)) / std::abs(std::log(u)));
        const double v = rng.uniform();
        const double c = kern::cos_2pi(v);
        max_cos_abs = std::max(
            max_cos_abs, std::abs(c - std::cos(2.0 * M_PI * v)));
    }
    CHECK(max_log_rel < 1e-13);
    CHECK(max_cos_abs < 1e-13);
    CHECK(kern::log_u01(1.0) == 0.0);
    CHECK(kern::cos_2pi(0.0) == 1.0);
    CHECK(kern::cos_2pi(0.5) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("scalar and AVX2 backends are bit-identical") {
    if (!kern::avx2_supported()) {
        MESSAGE("AVX2 not available; skipping equivalence checks");
        return;
    }

    SUBCASE("reductions") {
        Xoshiro256 rng(3, 1);
        for (std::size_t n : {1u, 4u, 7u, 1000u, 100003u}) {
            std::vector<double> x(n);
            for (auto& v : x) v = rng.uniform() * 2.0 - 1.0;
            kern::set_backend(kern::Backend::scalar);
            const double s1 = kern::sum(x.data(), n);
            const double q1 = kern::sum_sq(x.data(), n);
            kern::set_backend(kern::Backend::avx2);
            const double s2 = kern::sum(x.data(), n);
            const double q2 = kern::sum_sq(x.data(), n);
            CHECK(std::memcmp(&s1, &s2, 8) == 0);
            CHECK(std::memcmp(&q1, &q2, 8) == 0);
        }
    }

    SUBCASE("normal blocks") {
        for (std::uint64_t seed : {1ull, 42ull, 0xdeadbeefull}) {
            auto [a, b] = both_backends(4 * 4096, [&](double* out) {
                kern::normal_block(seed, 100, 4096, out);
            });
            CHECK(bit_equal(a, b));
        }
    }

    SUBCASE("euler endpoints, including partial blocks") {
        for (std::size_t count : {1u, 3u, 4u, 5u, 17u, 64u}) {
            auto [a, b] = both_backends(count, [&](double* out) {
                kern::euler_endpoints(0.8, 1.0, 1e-3, 500, 9, 7, count, out);
            });
            CHECK(bit_equal(a, b));
        }
    }
}

TEST_CASE("kernel normals are standard normal") {
    const std::size_t steps = 100000;
    std::vector<double> z(4 * steps);
    kern::normal_block(2024, 0, steps, z.data());

    const auto s = stats::summarize(z);
    CHECK(std::abs(s.mean) < 4 * s.stderr_mean);
    CHECK(s.variance == doctest::Approx(1.0).epsilon(0.02));

    auto ks = stats::ks_test(z, [](double x) { return stats::normal_cdf(x); });
    CHECK(ks.p_value > 0.001);
}

TEST_CASE("euler endpoints preserve the mean and absorb at zero") {
    const std::size_t n = 40000;
    std::vector<double> x(n);
    kern::euler_endpoints(1.0, 1.0, 1e-3, 250, 5, 0, n, x.data());
    for (double v : x) REQUIRE(v >= 0.0);

    const auto s = stats::summarize(x);
    CHECK(std::abs(s.mean - 1.0) < 4 * s.stderr_mean);

    // Var X_t = sigma^2 t for x0 = 1 (quarter horizon here)
    CHECK(s.variance == doctest::Approx(0.25).epsilon(0.05));

    // started at zero: identically zero
    std::vector<double> zero(64);
    kern::euler_endpoints(2.0, 0.0, 1e-3, 100, 5, 0, 64, zero.data());
    for (double v : zero) CHECK(v == 0.0);
}
