// AVX2 kernel variants: four 64-bit lanes per register, one xoshiro256++
// stream per lane. Operation order mirrors kernels_scalar.cpp exactly (no
// FMA), so outputs are bit-identical to the scalar reference.

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "brickwall/rng.hpp"
#include "kernels_detail.hpp"

namespace brickwall::kern {

using namespace detail;

namespace {

inline __m256i rotl_epi64(__m256i x, int k) {
    return _mm256_or_si256(_mm256_slli_epi64(x, k), _mm256_srli_epi64(x, 64 - k));
}

struct LaneRng {
    __m256i s0, s1, s2, s3;

    void seed(std::uint64_t seed, std::uint64_t stream_base) {
        alignas(32) std::uint64_t w[4][4];
        for (int lane = 0; lane < 4; ++lane) {
            Xoshiro256 g(seed, stream_base + lane);
            const auto& st = g.state();
            for (int i = 0; i < 4; ++i) w[i][lane] = st[i];
        }
        s0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(w[0]));
        s1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(w[1]));
        s2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(w[2]));
        s3 = _mm256_load_si256(reinterpret_cast<const __m256i*>(w[3]));
    }

    __m256i next() {
        const __m256i result =
            _mm256_add_epi64(rotl_epi64(_mm256_add_epi64(s0, s3), 23), s0);
        const __m256i t = _mm256_slli_epi64(s1, 17);
        s2 = _mm256_xor_si256(s2, s0);
        s3 = _mm256_xor_si256(s3, s1);
        s1 = _mm256_xor_si256(s1, s2);
        s0 = _mm256_xor_si256(s0, s3);
        s2 = _mm256_xor_si256(s2, t);
        s3 = rotl_epi64(s3, 45);
        return result;
    }
};

// Exact u64 -> double for values < 2^52 (here: x >> 12).
inline __m256d to_double_52(__m256i v) {
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic)),
                         _mm256_set1_pd(0x1.0p52));
}

inline __m256d u01(__m256i x) {
    return _mm256_mul_pd(to_double_52(_mm256_srli_epi64(x, 12)),
                         _mm256_set1_pd(0x1.0p-52));
}

inline __m256d u01_pos(__m256i x) {
    return _mm256_mul_pd(
        _mm256_add_pd(to_double_52(_mm256_srli_epi64(x, 12)), _mm256_set1_pd(1.0)),
        _mm256_set1_pd(0x1.0p-52));
}

inline __m256d vec_log(__m256d u) {
    const __m256i bits = _mm256_castpd_si256(u);
    const __m256i ebits =
        _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff));
    __m256d e = _mm256_sub_pd(to_double_52(ebits), _mm256_set1_pd(1023.0));
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffll)),
        _mm256_set1_epi64x(0x3ff0000000000000ll)));

    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s =
        _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d s2 = _mm256_mul_pd(s, s);
    __m256d poly = _mm256_set1_pd(kLogC[9]);
    for (int i = 8; i >= 0; --i)
        poly = _mm256_add_pd(_mm256_mul_pd(poly, s2), _mm256_set1_pd(kLogC[i]));
    const __m256d lnm = _mm256_mul_pd(
        _mm256_set1_pd(2.0),
        _mm256_add_pd(s, _mm256_mul_pd(_mm256_mul_pd(s, s2), poly)));
    return _mm256_add_pd(
        _mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi)),
        _mm256_add_pd(_mm256_mul_pd(e, _mm256_set1_pd(kLn2Lo)), lnm));
}

inline __m256d vec_cos2pi(__m256d u) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d ge = _mm256_cmp_pd(u, half, _CMP_GE_OQ);
    const __m256d r = _mm256_sub_pd(u, _mm256_and_pd(ge, _mm256_set1_pd(1.0)));
    const __m256d abs_mask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
    const __m256d a = _mm256_and_pd(r, abs_mask);
    const __m256d le = _mm256_cmp_pd(a, _mm256_set1_pd(0.25), _CMP_LE_OQ);
    const __m256d folded = _mm256_blendv_pd(_mm256_sub_pd(half, a), a, le);
    const __m256d sign =
        _mm256_blendv_pd(_mm256_set1_pd(-1.0), _mm256_set1_pd(1.0), le);
    const __m256d z = _mm256_mul_pd(_mm256_set1_pd(kTwoPi), folded);
    const __m256d w = _mm256_mul_pd(z, z);
    __m256d poly = _mm256_set1_pd(kCosC[11]);
    for (int i = 10; i >= 0; --i)
        poly = _mm256_add_pd(_mm256_mul_pd(poly, w), _mm256_set1_pd(kCosC[i]));
    return _mm256_mul_pd(sign, poly);
}

inline __m256d vec_normal(LaneRng& rng) {
    const __m256d u1 = u01_pos(rng.next());
    const __m256d u2 = u01(rng.next());
    const __m256d q = _mm256_mul_pd(_mm256_set1_pd(-2.0), vec_log(u1));
    return _mm256_mul_pd(_mm256_sqrt_pd(q), vec_cos2pi(u2));
}

}  // namespace

double sum_avx2(const double* x, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    double total = (a[0] + a[1]) + (a[2] + a[3]);
    for (std::size_t i = n4; i < n; ++i) total += x[i];
    return total;
}

double sum_sq_avx2(const double* x, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    double total = (a[0] + a[1]) + (a[2] + a[3]);
    for (std::size_t i = n4; i < n; ++i) total += x[i] * x[i];
    return total;
}

void normal_block_avx2(std::uint64_t seed, std::uint64_t stream_base,
                       std::size_t n_steps, double* out) {
    LaneRng rng;
    rng.seed(seed, stream_base);
    for (std::size_t k = 0; k < n_steps; ++k)
        _mm256_storeu_pd(out + 4 * k, vec_normal(rng));
}

void euler_endpoints_avx2(double sigma_sq, double x0, double dt,
                          std::int64_t n_steps, std::uint64_t seed,
                          std::uint64_t stream_base, std::size_t count,
                          double* out) {
    const double coef = std::sqrt(sigma_sq) * std::sqrt(dt);
    const __m256d vcoef = _mm256_set1_pd(coef);
    const __m256d zero = _mm256_setzero_pd();

    std::size_t base = 0;
    // Two interleaved 4-lane blocks hide the sqrt/div latency chain.
    for (; base + 8 <= count; base += 8) {
        LaneRng rng_a, rng_b;
        rng_a.seed(seed, stream_base + base);
        rng_b.seed(seed, stream_base + base + 4);
        __m256d xa = _mm256_set1_pd(x0);
        __m256d xb = _mm256_set1_pd(x0);
        for (std::int64_t k = 0; k < n_steps; ++k) {
            const __m256d za = vec_normal(rng_a);
            const __m256d zb = vec_normal(rng_b);
            const __m256d ta =
                _mm256_mul_pd(_mm256_mul_pd(vcoef, _mm256_sqrt_pd(xa)), za);
            const __m256d tb =
                _mm256_mul_pd(_mm256_mul_pd(vcoef, _mm256_sqrt_pd(xb)), zb);
            xa = _mm256_max_pd(zero, _mm256_add_pd(xa, ta));
            xb = _mm256_max_pd(zero, _mm256_add_pd(xb, tb));
        }
        _mm256_storeu_pd(out + base, xa);
        _mm256_storeu_pd(out + base + 4, xb);
    }
    for (; base < count; base += 4) {
        LaneRng rng;
        rng.seed(seed, stream_base + base);
        __m256d x = _mm256_set1_pd(x0);
        for (std::int64_t k = 0; k < n_steps; ++k) {
            const __m256d z = vec_normal(rng);
            const __m256d t = _mm256_mul_pd(_mm256_mul_pd(vcoef, _mm256_sqrt_pd(x)), z);
            x = _mm256_max_pd(zero, _mm256_add_pd(x, t));
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, x);
        const std::size_t m = count - base < 4 ? count - base : 4;
        std::memcpy(out + base, lanes, m * sizeof(double));
    }
}

}  // namespace brickwall::kern

#endif  // __AVX2__
