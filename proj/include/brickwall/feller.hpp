#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "brickwall/rng.hpp"

namespace brickwall {

// The limiting diffusion dX = sigma sqrt(X) dW. Ground truth for the
// scaling-limit tests: exact transitions via the branching representation,
// an Euler discretization as the independent oracle for the exact sampler,
// and the closed-form extinction law.
struct FellerParams {
    double sigma_sq = 1.0;
    double x0 = 1.0;
};

// P(extinction time <= t) = exp(-2 x0 / (sigma^2 t)).
double extinction_cdf(const FellerParams& p, double t);

// Exact draw of X_s given X_0 = x0. As a continuous-state branching process
// with mechanism psi(u) = (sigma^2/2) u^2, the transition is compound
// Poisson: N ~ Poisson(2 x0 / (sigma^2 s)) exponential clusters of mean
// sigma^2 s / 2 (zero when N = 0). Derived from the branching mechanism, so
// it must stay validated against the Euler oracle (see tests and the
// acceptance battery).
double exact_transition(const FellerParams& p, double s, Xoshiro256& rng);

// Full-truncation Euler path on the grid {0, step, ..., n*step <= horizon}:
// X' = max(0, X + sigma sqrt(max(0,X)) sqrt(step) Z). Absorbed at 0. Returns
// the sampled path including X_0.
std::vector<double> euler_path(const FellerParams& p, double step, double horizon,
                               Xoshiro256& rng);

// Batch of Euler endpoints at time n_steps*step, one path per stream
// (seed, stream_base + i); runs on the kernel backend (AVX2 when available).
std::vector<double> euler_endpoints_batch(const FellerParams& p, double step,
                                          std::int64_t n_steps, std::uint64_t seed,
                                          std::uint64_t stream_base,
                                          std::size_t count);

// One time-t marginal of the Feller flow: independent exact transitions per
// adjacent mass, returned as cumulative sums (a nondecreasing mass map).
std::vector<double> flow_sample(std::span<const FellerParams> increments,
                                double t, Xoshiro256& rng);

// Exact Poisson sampler (chunked product method; no approximation at any
// lambda).
std::int64_t sample_poisson(double lambda, Xoshiro256& rng);

}  // namespace brickwall
