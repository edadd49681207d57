#include "brickwall/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "brickwall/errors.hpp"
#include "brickwall/kernels.hpp"

namespace brickwall::stats {

Summary summarize(std::span<const double> sample) {
    Summary s;
    s.n = sample.size();
    if (s.n == 0) return s;
    const double total = kern::sum(sample.data(), sample.size());
    s.mean = total / static_cast<double>(s.n);
    if (s.n > 1) {
        const double sq = kern::sum_sq(sample.data(), sample.size());
        double var = (sq - static_cast<double>(s.n) * s.mean * s.mean) /
                     static_cast<double>(s.n - 1);
        s.variance = var > 0.0 ? var : 0.0;
        s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.n));
    }
    return s;
}

double kolmogorov_q(double t) {
    // P(K > t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
    if (t <= 0.0) return 1.0;
    if (t < 0.2) return 1.0;  // series converges slowly; Q is 1 to 14 digits
    double sum = 0.0;
    for (int k = 1; k <= 128; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    const double q = 2.0 * sum;
    return std::min(1.0, std::max(0.0, q));
}

namespace {

double ks_p_value(double d, double n_eff) {
    // Stephens' effective-size correction for the asymptotic distribution.
    const double rn = std::sqrt(n_eff);
    return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf) {
    if (sample.size() < 30)
        throw TooFewSamples("ks_test: need at least 30 samples, got " +
                            std::to_string(sample.size()));
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return {d, ks_p_value(d, n), sample.size()};
}

KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 30 || b.size() < 30)
        throw TooFewSamples("ks_test_two_sample: need at least 30 samples per side");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }
    const double n_eff = na * nb / (na + nb);
    return {d, ks_p_value(d, n_eff), static_cast<std::size_t>(n_eff)};
}

Chi2Result chi2_two_sample(const std::vector<double>& counts_a,
                           const std::vector<double>& counts_b,
                           double min_expected) {
    if (counts_a.size() != counts_b.size() || counts_a.empty())
        throw std::invalid_argument("chi2_two_sample: bin mismatch");

    // Merge under-populated bins rightward so the chi-square approximation
    // holds (pooled expected count >= min_expected per kept bin).
    const double ta = kern::sum(counts_a.data(), counts_a.size());
    const double tb = kern::sum(counts_b.data(), counts_b.size());
    std::vector<double> a, b;
    double acca = 0.0, accb = 0.0;
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        acca += counts_a[i];
        accb += counts_b[i];
        const double pooled = (acca + accb) * std::min(ta, tb) / (ta + tb);
        if (pooled >= min_expected) {
            a.push_back(acca);
            b.push_back(accb);
            acca = accb = 0.0;
        }
    }
    if (acca > 0.0 || accb > 0.0) {
        if (a.empty()) {
            a.push_back(acca);
            b.push_back(accb);
        } else {
            a.back() += acca;
            b.back() += accb;
        }
    }
    if (a.size() < 2)
        throw TooFewSamples("chi2_two_sample: fewer than 2 usable bins");

    double stat = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double pooled = a[i] + b[i];
        const double ea = pooled * ta / (ta + tb);
        const double eb = pooled * tb / (ta + tb);
        stat += (a[i] - ea) * (a[i] - ea) / ea;
        stat += (b[i] - eb) * (b[i] - eb) / eb;
    }
    const int dof = static_cast<int>(a.size()) - 1;
    const double p = boost::math::gamma_q(dof / 2.0, stat / 2.0);
    return {stat, p, dof};
}

Interval wilson_ci(std::size_t successes, std::size_t trials, double level) {
    if (trials == 0) return {0.0, 1.0};
    const double z = normal_quantile(0.5 + level / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

Interval normal_ci(const Summary& s, double level) {
    const double z = normal_quantile(0.5 + level / 2.0);
    return {s.mean - z * s.stderr_mean, s.mean + z * s.stderr_mean};
}

double proportion_z_test(std::size_t k1, std::size_t n1, std::size_t k2,
                         std::size_t n2) {
    const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double pooled =
        static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    const double se = std::sqrt(pooled * (1.0 - pooled) *
                                (1.0 / static_cast<double>(n1) +
                                 1.0 / static_cast<double>(n2)));
    if (se == 0.0) return 1.0;
    const double z = std::abs(p1 - p2) / se;
    return 2.0 * (1.0 - normal_cdf(z));
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double exponential_cdf(double x, double rate) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p outside (0,1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double slope_through_origin(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("slope_through_origin: size mismatch");
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    return sxy / sxx;
}

}  // namespace brickwall::stats
