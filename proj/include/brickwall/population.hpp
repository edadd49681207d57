#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "brickwall/brick_law.hpp"
#include "brickwall/row_flow.hpp"

namespace brickwall {

// Single-slice population chain M_{k+1} = M_1([0, M_k[), re-anchored each
// generation (shift invariance). Two interleaved generator streams per
// replica keep the renewal loop out of the generator's latency chain; stream
// ids are (2*replica, 2*replica + 1) under the master seed.
class SliceChain {
  public:
    SliceChain(const BrickLaw& law, std::uint64_t seed, std::uint64_t replica)
        : law_(&law), a_(seed, 2 * replica), b_(seed, 2 * replica + 1) {}

    // One generation from population m >= 1.
    std::int64_t step(std::int64_t m) {
        const Brick root = law_->sample_root(a_);
        std::int64_t r = root.bottom - static_cast<std::int64_t>(
                                           a_.below(static_cast<std::uint64_t>(root.bottom)));
        if (r > m) return 0;
        std::int64_t pop = root.top;
        for (;;) {
            const Brick x = law_->sample(a_);
            const Brick y = law_->sample(b_);
            r += x.bottom;
            if (r > m) break;
            pop += x.top;
            r += y.bottom;
            if (r > m) break;
            pop += y.top;
        }
        return pop;
    }

    // Runs until extinction or `horizon` generations from population m0;
    // returns the extinction time, or nullopt if censored at the horizon.
    std::optional<std::int64_t> extinction_time(std::int64_t m0,
                                                std::int64_t horizon) {
        std::int64_t m = m0;
        for (std::int64_t k = 1; k <= horizon; ++k) {
            m = step(m);
            if (m == 0) return k;
        }
        return std::nullopt;
    }

  private:
    const BrickLaw* law_;
    Xoshiro256 a_, b_;
};

// Stop rule for the strip-exit time: stop when any live slice leaves
// (lower, upper), i.e. pop <= lower or pop >= upper.
struct StopRule {
    std::int64_t lower = 0;
    std::int64_t upper = 0;
};

enum class SliceMode {
    joint,        // slices share rows (the model)
    independent,  // each slice re-anchored separately; variance-reduction
                  // studies only, NOT the joint law of the model
};

struct PopulationPath {
    // populations[k][i]: slice i at generation k (k = 0 is the initial state)
    std::vector<std::vector<std::int64_t>> populations;
    std::vector<std::optional<std::int64_t>> extinction_times;  // per slice
    std::optional<std::int64_t> strip_exit_time;  // stop-rule hit, if any
    std::int64_t horizon = 0;

    std::size_t slice_count() const {
        return populations.empty() ? 0 : populations.front().size();
    }
    // First generation k with slice >= x, from the recorded path.
    std::optional<std::int64_t> hitting_time_geq(std::size_t slice,
                                                 std::int64_t x) const;
};

// Iterates the flow up to `horizon` generations, or until every slice is
// absorbed, or (when given) the stop rule fires. Endpoints define
// slice i = [endpoints[i], endpoints[i+1]).
PopulationPath run_slices(const BrickLaw& law,
                          const std::vector<std::int64_t>& endpoints,
                          std::int64_t horizon,
                          std::optional<StopRule> stop_rule, Xoshiro256& rng,
                          SliceMode mode = SliceMode::joint);

struct Thm12Report {
    std::vector<double> n_values;
    std::vector<double> mean_sq_increment;  // E[(A_1^{(n)} - n)^2]
    double slope = 0.0;                     // fit of the above against n
    double slope_ratio = 0.0;               // slope / sigma^2
    double floor_at_one = 0.0;              // E[(A_1^{(1)} - 1)^2]
    double floor_stderr = 0.0;
    double clt_p_value = 0.0;               // KS at the largest n
    bool pass = false;
};

// Checks the three drift/variance/CLT conditions of the diffusion limit on a
// grid of n: square increments grow like sigma^2 n, a strictly positive
// variance floor at n = 1, and a Gaussian one-step profile at the largest n.
Thm12Report verify_thm12_hypotheses(const BrickLaw& law,
                                    const std::vector<std::int64_t>& n_grid,
                                    std::size_t replicas, std::uint64_t seed,
                                    int threads);

struct YaglomSample {
    std::vector<double> conditional;  // M_n([0,1[)/n given survival to n
    std::size_t survivors = 0;
    std::size_t replicas = 0;
    double survival_freq() const {
        return static_cast<double>(survivors) / static_cast<double>(replicas);
    }
};

// Rejection sampling of M_n([0,1[)/n conditioned on survival. Plain
// rejection: at the sizes used the survival probability ~ 2/(sigma^2 n) makes
// this affordable and unbiased.
YaglomSample yaglom_statistics(const BrickLaw& law, std::int64_t n,
                               std::size_t replicas, std::uint64_t seed,
                               int threads);

struct TailCurve {
    std::int64_t x = 0;  // initial population
    std::int64_t n = 0;  // cap and time unit
    // probability[j-1] = P(A_{kn} <= n for all k <= j and A_{jn} > 0)
    std::vector<double> probability;
    std::vector<std::size_t> counts;
    std::size_t replicas = 0;
};

// Probability of staying positive but capped below n at every multiple of n,
// as a function of K/n. The log-probability must eventually decay linearly.
TailCurve long_thin_tail(const BrickLaw& law, std::int64_t x, std::int64_t n,
                         std::int64_t k_max, std::size_t replicas,
                         std::uint64_t seed, int threads);

}  // namespace brickwall
