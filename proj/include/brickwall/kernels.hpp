#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace brickwall::kern {

// Data-parallel inner loops: batched Euler stepping of the square-root
// diffusion, batched normal generation and moment reductions. Each kernel has
// a scalar reference implementation and an AVX2 variant selected at runtime.
// The two are bit-identical by construction (same operation order, same
// polynomial evaluations, no FMA contraction), so backend choice never
// changes simulation output; the equivalence is enforced by tests.

enum class Backend { scalar, avx2 };

bool avx2_supported();
Backend active_backend();
void set_backend(Backend b);  // falls back to scalar if unsupported
std::string backend_name();

// Deterministic reductions. Lane semantics are fixed (4 interleaved partial
// sums combined as (s0+s1)+(s2+s3), then a sequential tail), so results do
// not depend on the backend.
double sum(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);

// Writes n_steps * 4 standard normals, out[4*k + lane], lane streams
// (seed, stream_base + lane). One Box-Muller cosine normal per step per lane.
void normal_block(std::uint64_t seed, std::uint64_t stream_base,
                  std::size_t n_steps, double* out);

// The deterministic log/cosine evaluated inside the kernels, exposed so tests
// can pin their accuracy against libm.
double log_u01(double u);   // natural log, u in (0, 1]
double cos_2pi(double u);   // cos(2 pi u), u in [0, 1)

// Advances `count` independent paths of dX = sigma sqrt(X) dW started at x0,
// full-truncation Euler with step dt, n_steps steps; path i consumes stream
// (seed, stream_base + i). Writes the endpoint of path i into out[i].
// State 0 is absorbing.
void euler_endpoints(double sigma_sq, double x0, double dt,
                     std::int64_t n_steps, std::uint64_t seed,
                     std::uint64_t stream_base, std::size_t count, double* out);

}  // namespace brickwall::kern
