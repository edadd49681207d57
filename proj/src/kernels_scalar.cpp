// Scalar reference kernels. These define the semantics; the AVX2 variants in
// kernels_avx2.cpp must reproduce them bit for bit (see test_kernels.cpp).
// Compiled with -ffp-contract=off so the compiler cannot fuse mul+add.

#include <bit>
#include <cmath>
#include <cstring>

#include "brickwall/rng.hpp"
#include "kernels_detail.hpp"

namespace brickwall::kern {

using namespace detail;

namespace {

// log(u) for u in (0, 1]: exponent/mantissa split plus the atanh series.
inline double ref_log(double u) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(u);
    int e = static_cast<int>((bits >> 52) & 0x7ff) - 1023;
    double m = std::bit_cast<double>((bits & 0x000fffffffffffffull) |
                                     0x3ff0000000000000ull);  // [1, 2)
    if (m > 1.4142135623730951) {  // keep m in (sqrt(1/2), sqrt(2)]
        m = m * 0.5;
        e += 1;
    }
    const double s = (m - 1.0) / (m + 1.0);
    const double s2 = s * s;
    double poly = kLogC[9];
    for (int i = 8; i >= 0; --i) poly = poly * s2 + kLogC[i];
    const double lnm = 2.0 * (s + s * s2 * poly);
    const double de = static_cast<double>(e);
    return de * kLn2Hi + (de * kLn2Lo + lnm);
}

// cos(2 pi u) for u in [0, 1): fold into [0, 1/4] and evaluate the Taylor
// polynomial of cos on [0, pi/2].
inline double ref_cos2pi(double u) {
    const double r = u >= 0.5 ? u - 1.0 : u;  // [-1/2, 1/2)
    const double a = r < 0.0 ? -r : r;
    const double folded = a <= 0.25 ? a : 0.5 - a;
    const double sign = a <= 0.25 ? 1.0 : -1.0;
    const double z = kTwoPi * folded;
    const double w = z * z;
    double poly = kCosC[11];
    for (int i = 10; i >= 0; --i) poly = poly * w + kCosC[i];
    return sign * poly;
}

inline double ref_normal(std::uint64_t s[4]) {
    const double u1 = u01_pos(xoshiro_next(s));
    const double u2 = u01(xoshiro_next(s));
    return std::sqrt(-2.0 * ref_log(u1)) * ref_cos2pi(u2);
}

inline void seed_lane(std::uint64_t seed, std::uint64_t stream, std::uint64_t s[4]) {
    Xoshiro256 g(seed, stream);
    const auto& st = g.state();
    for (int i = 0; i < 4; ++i) s[i] = st[i];
}

}  // namespace

double log_u01(double u) { return ref_log(u); }
double cos_2pi(double u) { return ref_cos2pi(u); }

double sum_scalar(const double* x, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    for (std::size_t i = 0; i < n4; i += 4) {
        a0 += x[i];
        a1 += x[i + 1];
        a2 += x[i + 2];
        a3 += x[i + 3];
    }
    double total = (a0 + a1) + (a2 + a3);
    for (std::size_t i = n4; i < n; ++i) total += x[i];
    return total;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    for (std::size_t i = 0; i < n4; i += 4) {
        a0 += x[i] * x[i];
        a1 += x[i + 1] * x[i + 1];
        a2 += x[i + 2] * x[i + 2];
        a3 += x[i + 3] * x[i + 3];
    }
    double total = (a0 + a1) + (a2 + a3);
    for (std::size_t i = n4; i < n; ++i) total += x[i] * x[i];
    return total;
}

void normal_block_scalar(std::uint64_t seed, std::uint64_t stream_base,
                         std::size_t n_steps, double* out) {
    std::uint64_t s[4][4];
    for (int lane = 0; lane < 4; ++lane) seed_lane(seed, stream_base + lane, s[lane]);
    for (std::size_t k = 0; k < n_steps; ++k)
        for (int lane = 0; lane < 4; ++lane) out[4 * k + lane] = ref_normal(s[lane]);
}

void euler_endpoints_scalar(double sigma_sq, double x0, double dt,
                            std::int64_t n_steps, std::uint64_t seed,
                            std::uint64_t stream_base, std::size_t count,
                            double* out) {
    const double coef = std::sqrt(sigma_sq) * std::sqrt(dt);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t s[4];
        seed_lane(seed, stream_base + i, s);
        double x = x0;
        for (std::int64_t k = 0; k < n_steps; ++k) {
            const double z = ref_normal(s);
            const double xn = x + coef * std::sqrt(x) * z;
            x = 0.0 > xn ? 0.0 : xn;  // mirrors _mm256_max_pd(0, xn)
        }
        out[i] = x;
    }
}

}  // namespace brickwall::kern
