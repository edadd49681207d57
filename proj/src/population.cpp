#include "brickwall/population.hpp"

#include <cmath>

#include "brickwall/parallel.hpp"
#include "brickwall/stats.hpp"

namespace brickwall {

std::optional<std::int64_t> PopulationPath::hitting_time_geq(
    std::size_t slice, std::int64_t x) const {
    for (std::size_t k = 0; k < populations.size(); ++k)
        if (populations[k][slice] >= x) return static_cast<std::int64_t>(k);
    return std::nullopt;
}

PopulationPath run_slices(const BrickLaw& law,
                          const std::vector<std::int64_t>& endpoints,
                          std::int64_t horizon,
                          std::optional<StopRule> stop_rule, Xoshiro256& rng,
                          SliceMode mode) {
    if (horizon < 1) throw std::invalid_argument("run_slices: horizon must be >= 1");
    auto state = FlowState::initial(endpoints);
    const std::size_t slices = state.slice_count();

    PopulationPath path;
    path.horizon = horizon;
    path.extinction_times.assign(slices, std::nullopt);

    auto snapshot = [&](const FlowState& st) {
        std::vector<std::int64_t> pops(slices);
        for (std::size_t i = 0; i < slices; ++i) pops[i] = st.population(i);
        path.populations.push_back(std::move(pops));
    };
    snapshot(state);

    auto exits_strip = [&](std::int64_t pop) {
        return stop_rule && (pop <= stop_rule->lower || pop >= stop_rule->upper);
    };

    // Independent mode keeps one separately re-anchored chain per slice;
    // joint mode evolves all endpoints on shared rows.
    std::vector<std::int64_t> indep;
    if (mode == SliceMode::independent)
        for (std::size_t i = 0; i < slices; ++i) indep.push_back(state.population(i));

    for (std::int64_t k = 1; k <= horizon; ++k) {
        bool any_alive = false;
        if (mode == SliceMode::joint) {
            state = flow_step(state, law, rng);
            snapshot(state);
        } else {
            for (auto& m : indep)
                if (m > 0) m = one_step_population(law, m, rng);
            std::vector<std::int64_t> pops(indep.begin(), indep.end());
            path.populations.push_back(std::move(pops));
        }
        const auto& pops = path.populations.back();
        for (std::size_t i = 0; i < slices; ++i) {
            if (pops[i] == 0 && !path.extinction_times[i])
                path.extinction_times[i] = k;
            if (pops[i] > 0) any_alive = true;
            // Absorption at 0 also exits the strip (0 <= lower).
            if (exits_strip(pops[i]) && !path.strip_exit_time)
                path.strip_exit_time = k;
        }
        if (!any_alive || path.strip_exit_time) break;
    }
    return path;
}

Thm12Report verify_thm12_hypotheses(const BrickLaw& law,
                                    const std::vector<std::int64_t>& n_grid,
                                    std::size_t replicas, std::uint64_t seed,
                                    int threads) {
    if (n_grid.empty()) throw std::invalid_argument("verify_thm12: empty n grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("verify_thm12: n grid must increase");

    Thm12Report report;
    std::vector<double> largest_increments(replicas);

    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::int64_t n = n_grid[gi];
        std::vector<double> sq(replicas);
        parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t r = begin; r < end; ++r) {
                SliceChain chain(law, seed + gi, r);
                const double d =
                    static_cast<double>(chain.step(n)) - static_cast<double>(n);
                sq[r] = d * d;
                if (gi + 1 == n_grid.size()) largest_increments[r] = d;
            }
        });
        report.n_values.push_back(static_cast<double>(n));
        report.mean_sq_increment.push_back(stats::summarize(sq).mean);
    }

    report.slope =
        stats::slope_through_origin(report.n_values, report.mean_sq_increment);
    report.slope_ratio = report.slope / law.sigma_sq();

    {
        // Variance floor at n = 1: strictly positive mean square increment.
        std::vector<double> sq(replicas);
        parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t r = begin; r < end; ++r) {
                SliceChain chain(law, seed ^ 0x5bd1e995u, r);
                const double d = static_cast<double>(chain.step(1)) - 1.0;
                sq[r] = d * d;
            }
        });
        const auto s = stats::summarize(sq);
        report.floor_at_one = s.mean;
        report.floor_stderr = s.stderr_mean;
    }

    {
        const double n = report.n_values.back();
        const double sd = std::sqrt(law.sigma_sq());
        std::vector<double> scaled(replicas);
        for (std::size_t r = 0; r < replicas; ++r)
            scaled[r] = largest_increments[r] / std::sqrt(n);
        report.clt_p_value = stats::ks_test(std::move(scaled), [sd](double x) {
                                 return stats::normal_cdf(x, 0.0, sd);
                             }).p_value;
    }

    report.pass = report.slope_ratio > 0.95 && report.slope_ratio < 1.05 &&
                  report.floor_at_one > 3 * report.floor_stderr &&
                  report.clt_p_value > 0.01;
    return report;
}

YaglomSample yaglom_statistics(const BrickLaw& law, std::int64_t n,
                               std::size_t replicas, std::uint64_t seed,
                               int threads) {
    if (n < 1) throw std::invalid_argument("yaglom_statistics: n must be >= 1");
    std::vector<std::int64_t> at_n(replicas);
    parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            SliceChain chain(law, seed, r);
            std::int64_t m = 1;
            for (std::int64_t k = 0; k < n && m > 0; ++k) m = chain.step(m);
            at_n[r] = m;
        }
    });

    YaglomSample out;
    out.replicas = replicas;
    for (std::size_t r = 0; r < replicas; ++r) {
        if (at_n[r] > 0) {
            ++out.survivors;
            out.conditional.push_back(static_cast<double>(at_n[r]) /
                                      static_cast<double>(n));
        }
    }
    return out;
}

TailCurve long_thin_tail(const BrickLaw& law, std::int64_t x, std::int64_t n,
                         std::int64_t k_max, std::size_t replicas,
                         std::uint64_t seed, int threads) {
    if (x > n) throw std::invalid_argument("long_thin_tail: need x <= n");
    TailCurve curve;
    curve.x = x;
    curve.n = n;
    curve.replicas = replicas;
    curve.counts.assign(static_cast<std::size_t>(k_max), 0);

    std::vector<std::vector<std::uint8_t>> hits(
        replicas, std::vector<std::uint8_t>(static_cast<std::size_t>(k_max), 0));
    parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            SliceChain chain(law, seed, r);
            std::int64_t m = x;
            bool capped_so_far = true;
            for (std::int64_t j = 1; j <= k_max && m > 0; ++j) {
                for (std::int64_t k = 0; k < n && m > 0; ++k) m = chain.step(m);
                capped_so_far = capped_so_far && m <= n;
                if (m > 0 && capped_so_far)
                    hits[r][static_cast<std::size_t>(j - 1)] = 1;
                if (!capped_so_far) break;  // event is monotone in j
            }
        }
    });
    for (std::size_t r = 0; r < replicas; ++r)
        for (std::size_t j = 0; j < curve.counts.size(); ++j)
            curve.counts[j] += hits[r][j];
    for (std::size_t j = 0; j < curve.counts.size(); ++j)
        curve.probability.push_back(static_cast<double>(curve.counts[j]) /
                                    static_cast<double>(replicas));
    return curve;
}

}  // namespace brickwall
