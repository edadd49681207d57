#include "brickwall/kernels.hpp"

#include <cstdlib>

namespace brickwall::kern {

// Scalar reference (always present).
double sum_scalar(const double* x, std::size_t n);
double sum_sq_scalar(const double* x, std::size_t n);
void normal_block_scalar(std::uint64_t, std::uint64_t, std::size_t, double*);
void euler_endpoints_scalar(double, double, double, std::int64_t, std::uint64_t,
                            std::uint64_t, std::size_t, double*);

#if defined(BRICKWALL_HAVE_AVX2)
double sum_avx2(const double* x, std::size_t n);
double sum_sq_avx2(const double* x, std::size_t n);
void normal_block_avx2(std::uint64_t, std::uint64_t, std::size_t, double*);
void euler_endpoints_avx2(double, double, double, std::int64_t, std::uint64_t,
                          std::uint64_t, std::size_t, double*);
#endif

namespace {

Backend g_backend = [] {
#if defined(BRICKWALL_HAVE_AVX2)
    if (const char* env = std::getenv("BRICKWALL_KERNELS")) {
        if (std::string(env) == "scalar") return Backend::scalar;
        if (std::string(env) == "avx2" && __builtin_cpu_supports("avx2"))
            return Backend::avx2;
    }
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}();

}  // namespace

bool avx2_supported() {
#if defined(BRICKWALL_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
    g_backend = (b == Backend::avx2 && avx2_supported()) ? Backend::avx2
                                                         : Backend::scalar;
}

std::string backend_name() {
    return g_backend == Backend::avx2 ? "avx2" : "scalar";
}

double sum(const double* x, std::size_t n) {
#if defined(BRICKWALL_HAVE_AVX2)
    if (g_backend == Backend::avx2) return sum_avx2(x, n);
#endif
    return sum_scalar(x, n);
}

double sum_sq(const double* x, std::size_t n) {
#if defined(BRICKWALL_HAVE_AVX2)
    if (g_backend == Backend::avx2) return sum_sq_avx2(x, n);
#endif
    return sum_sq_scalar(x, n);
}

void normal_block(std::uint64_t seed, std::uint64_t stream_base,
                  std::size_t n_steps, double* out) {
#if defined(BRICKWALL_HAVE_AVX2)
    if (g_backend == Backend::avx2)
        return normal_block_avx2(seed, stream_base, n_steps, out);
#endif
    return normal_block_scalar(seed, stream_base, n_steps, out);
}

void euler_endpoints(double sigma_sq, double x0, double dt,
                     std::int64_t n_steps, std::uint64_t seed,
                     std::uint64_t stream_base, std::size_t count, double* out) {
#if defined(BRICKWALL_HAVE_AVX2)
    if (g_backend == Backend::avx2)
        return euler_endpoints_avx2(sigma_sq, x0, dt, n_steps, seed, stream_base,
                                    count, out);
#endif
    return euler_endpoints_scalar(sigma_sq, x0, dt, n_steps, seed, stream_base,
                                  count, out);
}

}  // namespace brickwall::kern
