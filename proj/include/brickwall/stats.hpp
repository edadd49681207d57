#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace brickwall::stats {

// Mean / variance / standard error of the mean, computed with fixed-order
// reductions so results do not depend on thread count or kernel backend.
struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double stderr_mean = 0.0;
};

Summary summarize(std::span<const double> sample);

struct KsResult {
    double statistic = 0.0;  // D
    double p_value = 1.0;
    std::size_t n = 0;  // effective sample size
};

// One-sample Kolmogorov-Smirnov against a continuous cdf; asymptotic p-value
// (Kolmogorov's limiting series with the usual small-sample effective-n
// correction). Requires n >= 30.
KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov, asymptotic p-value with effective size
// n1*n2/(n1+n2).
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

// P(K > t) for the Kolmogorov distribution.
double kolmogorov_q(double t);

struct Chi2Result {
    double statistic = 0.0;
    double p_value = 1.0;
    int dof = 0;
};

// Two-sample homogeneity chi-square on binned counts (expected counts from
// the pooled sample). Bins with pooled expectation < min_expected are merged
// into their right neighbour.
Chi2Result chi2_two_sample(const std::vector<double>& counts_a,
                           const std::vector<double>& counts_b,
                           double min_expected = 5.0);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool overlaps(const Interval& other) const {
        return lo <= other.hi && other.lo <= hi;
    }
};

// Wilson score interval for a proportion.
Interval wilson_ci(std::size_t successes, std::size_t trials, double level);

// Normal (Wald) interval for a mean.
Interval normal_ci(const Summary& s, double level);

// Two-sided z-test for equality of two proportions.
double proportion_z_test(std::size_t k1, std::size_t n1, std::size_t k2,
                         std::size_t n2);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);
double exponential_cdf(double x, double rate);
double normal_quantile(double p);  // standard normal

// Least-squares slope of y against x through the origin.
double slope_through_origin(std::span<const double> x, std::span<const double> y);

}  // namespace brickwall::stats
