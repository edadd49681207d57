#include "brickwall/feller.hpp"

#include <cmath>
#include <stdexcept>

#include "brickwall/kernels.hpp"

namespace brickwall {

double extinction_cdf(const FellerParams& p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("extinction_cdf: t must be > 0");
    if (p.x0 <= 0.0) return 1.0;
    return std::exp(-2.0 * p.x0 / (p.sigma_sq * t));
}

std::int64_t sample_poisson(double lambda, Xoshiro256& rng) {
    if (lambda < 0.0) throw std::invalid_argument("sample_poisson: lambda < 0");
    std::int64_t n = 0;
    // Product method on chunks of rate <= 16 keeps the uniform product away
    // from underflow while staying exact for any lambda.
    while (lambda > 0.0) {
        const double chunk = lambda > 16.0 ? 16.0 : lambda;
        lambda -= chunk;
        const double limit = std::exp(-chunk);
        double prod = rng.uniform_pos();
        while (prod > limit) {
            ++n;
            prod *= rng.uniform_pos();
        }
    }
    return n;
}

double exact_transition(const FellerParams& p, double s, Xoshiro256& rng) {
    if (!(s > 0.0)) throw std::invalid_argument("exact_transition: s must be > 0");
    if (p.x0 <= 0.0) return 0.0;
    const double cluster_mean = p.sigma_sq * s / 2.0;
    const std::int64_t n = sample_poisson(p.x0 / cluster_mean, rng);
    double total = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        total += -std::log(rng.uniform_pos());
    return cluster_mean * total;
}

std::vector<double> euler_path(const FellerParams& p, double step, double horizon,
                               Xoshiro256& rng) {
    if (!(step > 0.0) || step > horizon)
        throw std::invalid_argument("euler_path: need 0 < step <= horizon");
    const auto n_steps = static_cast<std::size_t>(horizon / step + 1e-9);
    std::vector<double> path;
    path.reserve(n_steps + 1);
    const double coef = std::sqrt(p.sigma_sq) * std::sqrt(step);
    double x = p.x0 > 0.0 ? p.x0 : 0.0;
    path.push_back(x);
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (x > 0.0) {
            const double u1 = rng.uniform_pos();
            const double u2 = rng.uniform();
            const double z =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            x = std::max(0.0, x + coef * std::sqrt(x) * z);
        }
        path.push_back(x);
    }
    return path;
}

std::vector<double> euler_endpoints_batch(const FellerParams& p, double step,
                                          std::int64_t n_steps, std::uint64_t seed,
                                          std::uint64_t stream_base,
                                          std::size_t count) {
    std::vector<double> out(count);
    kern::euler_endpoints(p.sigma_sq, p.x0, step, n_steps, seed, stream_base,
                          count, out.data());
    return out;
}

std::vector<double> flow_sample(std::span<const FellerParams> increments,
                                double t, Xoshiro256& rng) {
    std::vector<double> cumulative;
    cumulative.reserve(increments.size());
    double acc = 0.0;
    for (const auto& inc : increments) {
        acc += exact_transition(inc, t, rng);
        cumulative.push_back(acc);
    }
    return cumulative;
}

}  // namespace brickwall
