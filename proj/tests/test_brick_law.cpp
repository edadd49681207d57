#include <cmath>

#include "doctest.h"

#include "brickwall/brick_law.hpp"
#include "brickwall/errors.hpp"
#include "brickwall/rng.hpp"

using namespace brickwall;

namespace {

Atom atom(std::int64_t b, std::int64_t h, std::int64_t num, std::int64_t den) {
    return {b, h, 0.0, Rational(num, den)};
}

// {((1,2),1/2),((2,1),1/2)}: Z = 3/2, sigma^2 = 2/3
BrickLaw law_a() {
    return make_brick_law({atom(1, 2, 1, 2), atom(2, 1, 1, 2)});
}

// {((1,3),1/3),((2,1),2/3)}: Z = 5/3, sigma^2 = 6/5
BrickLaw law_b() {
    return make_brick_law({atom(1, 3, 1, 3), atom(2, 1, 2, 3)});
}

}  // namespace

TEST_CASE("finite law caches Z and sigma^2") {
    auto a = law_a();
    CHECK(a.z() == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(a.sigma_sq() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    auto b = law_b();
    CHECK(b.z() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(b.sigma_sq() == doctest::Approx(6.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("sigma^2 agrees with the covariance form") {
    // sigma^2 = (var(eta) + var(beta) - 2 cov(B,H)) / Z
    for (const auto& law : {law_a(), law_b()}) {
        double eb = 0, eh = 0, ebb = 0, ehh = 0, ebh = 0;
        for (const auto& at : law.atoms()) {
            eb += at.b * at.p;
            eh += at.h * at.p;
            ebb += at.b * at.b * at.p;
            ehh += at.h * at.h * at.p;
            ebh += at.b * at.h * at.p;
        }
        const double alt =
            ((ehh - eh * eh) + (ebb - eb * eb) - 2 * (ebh - eb * eh)) / law.z();
        CHECK(std::abs(alt - law.sigma_sq()) < 1e-12);
    }
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(make_brick_law({atom(1, 1, 1, 1)}), Degenerate);
    CHECK_THROWS_AS(make_brick_law({atom(1, 2, 1, 1)}), NotCritical);
    CHECK_THROWS_AS(make_brick_law({atom(1, 2, 1, 2), atom(2, 1, 1, 3)}),
                    NotAProbability);
    CHECK_THROWS_AS(make_brick_law({}), NotAProbability);
    // float probabilities: tolerance-based checks
    CHECK_THROWS_AS(make_brick_law({{1, 2, 0.6, std::nullopt}, {2, 1, 0.4, std::nullopt}}),
                    NotCritical);
    CHECK_NOTHROW(make_brick_law({{1, 2, 0.5, std::nullopt}, {2, 1, 0.5, std::nullopt}}));
}

TEST_CASE("transpose swaps atoms and preserves Z, sigma^2") {
    auto b = law_b();
    auto t = b.transpose();
    REQUIRE(t.atoms().size() == 2);
    CHECK(t.atoms()[0].b == 3);
    CHECK(t.atoms()[0].h == 1);
    CHECK(t.atoms()[1].b == 1);
    CHECK(t.atoms()[1].h == 2);
    CHECK(t.z() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(t.sigma_sq() == doctest::Approx(6.0 / 5.0).epsilon(1e-14));

    auto tt = t.transpose();
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(tt.atoms()[i].b == b.atoms()[i].b);
        CHECK(tt.atoms()[i].h == b.atoms()[i].h);
    }
}

TEST_CASE("size-biased laws") {
    auto biased = size_biased(law_a());
    // rho* = {((1,2),1/3),((2,1),2/3)}
    REQUIRE(biased.rho_star.size() == 2);
    CHECK(biased.rho_star[0].p == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(biased.rho_star[1].p == doctest::Approx(2.0 / 3.0).epsilon(1e-13));

    double sum_rho = 0, sum_beta = 0, sum_eta = 0;
    for (const auto& a : biased.rho_star) sum_rho += a.p;
    for (const auto& e : biased.beta_star) sum_beta += e.p;
    for (const auto& e : biased.eta_star) sum_eta += e.p;
    CHECK(std::abs(sum_rho - 1.0) < 1e-12);
    CHECK(std::abs(sum_beta - 1.0) < 1e-12);
    CHECK(std::abs(sum_eta - 1.0) < 1e-12);

    // single atom is fixed by biasing
    auto single = size_biased(
        make_brick_law({{2, 1, 1.0, Rational(1)}}, LawChecks::none));
    REQUIRE(single.rho_star.size() == 1);
    CHECK(single.rho_star[0].p == doctest::Approx(1.0));

    // beta* mean of law B equals E[B^2]/Z = 9/5
    auto bb = size_biased(law_b());
    double mean = 0;
    for (const auto& e : bb.beta_star) mean += e.value * e.p;
    CHECK(mean == doctest::Approx(9.0 / 5.0).epsilon(1e-13));
}

TEST_CASE("rho* reweighting recovers rho expectations") {
    // E_rho[f] = E_rho*[f * Z / B] for bounded f; Monte Carlo at 3 sigma.
    auto law = law_b();
    auto f = [](const Brick& br) { return (br.bottom == 1 ? 1.0 : 0.0) * br.top; };
    const double exact = (1.0 / 3.0) * 3.0;  // f only hits atom ((1,3),1/3)

    Xoshiro256 rng(123, 0);
    const int n = 1000000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        const Brick br = law.sample_root(rng);
        const double v = f(br) * law.z() / static_cast<double>(br.bottom);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - exact) < 3 * se);
}

TEST_CASE("offspring special case") {
    Pmf p = {{0, 0.0, Rational(1, 2)}, {2, 0.0, Rational(1, 2)}};
    auto law = BrickLaw::from_bgw(p);
    CHECK(law.z() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(law.moment_h(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(law.sigma_sq() == doctest::Approx(1.0).epsilon(1e-12));  // Var(p)

    Pmf p2 = {{0, 0.0, Rational(1, 4)}, {1, 0.0, Rational(1, 2)}, {2, 0.0, Rational(1, 4)}};
    auto law2 = BrickLaw::from_bgw(p2);
    CHECK(law2.z() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(law2.sigma_sq() == doctest::Approx(0.5).epsilon(1e-10));

    CHECK_THROWS_AS(BrickLaw::from_bgw(Pmf{{1, 0.0, Rational(1)}}), ZeroP0);
    CHECK_THROWS_AS(BrickLaw::from_bgw(Pmf{{0, 0.0, Rational(1, 2)},
                                           {3, 0.0, Rational(1, 2)}}),
                    NotCritical);
}

TEST_CASE("offspring sigma^2 equals Var(p) across a battery") {
    struct Case {
        Pmf p;
        double var;
    };
    // all have mean exactly 1
    std::vector<Case> cases = {
        {{{0, 0.0, Rational(1, 2)}, {2, 0.0, Rational(1, 2)}}, 1.0},
        {{{0, 0.0, Rational(1, 4)}, {1, 0.0, Rational(1, 2)}, {2, 0.0, Rational(1, 4)}}, 0.5},
        {{{0, 0.0, Rational(3, 10)}, {1, 0.0, Rational(9, 20)}, {2, 0.0, Rational(1, 5)},
          {3, 0.0, Rational(1, 20)}}, 0.0},
    };
    // fill in the exact variance of the last case: E[X^2] - 1
    cases[2].var = 0.45 + 4 * 0.2 + 9 * 0.05 - 1.0;
    for (const auto& c : cases) {
        auto law = BrickLaw::from_bgw(c.p);
        CHECK(std::abs(law.sigma_sq() - c.var) < 1e-10);
    }
}

TEST_CASE("offspring law sampling matches closed-form moments") {
    auto law = BrickLaw::from_bgw(
        Pmf{{0, 0.0, Rational(1, 2)}, {2, 0.0, Rational(1, 2)}});
    Xoshiro256 rng(7, 0);
    const int n = 400000;
    double sb = 0, sh = 0, sb_root = 0;
    for (int i = 0; i < n; ++i) {
        const Brick br = law.sample(rng);
        sb += static_cast<double>(br.bottom);
        sh += static_cast<double>(br.top);
        sb_root += static_cast<double>(law.sample_root(rng).bottom);
    }
    CHECK(sb / n == doctest::Approx(2.0).epsilon(0.01));
    CHECK(sh / n == doctest::Approx(2.0).epsilon(0.01));
    // E[B*] = E[B^2]/Z = 6/2 = 3
    CHECK(sb_root / n == doctest::Approx(3.0).epsilon(0.01));

    // transpose swaps the marginals
    auto t = law.transpose();
    CHECK(t.moment_b(1) == doctest::Approx(law.moment_h(1)));
    CHECK(t.moment_h(2) == doctest::Approx(law.moment_b(2)));
    CHECK(t.sigma_sq() == doctest::Approx(law.sigma_sq()));
}

TEST_CASE("continuous-time discretization") {
    Pmf mu = {{2, 0.0, Rational(1)}};
    Pmf nu = {{1, 0.0, Rational(1)}};

    // lambda = (E[mu]-1)/E[nu] = 1 keeps the law critical.
    auto law = BrickLaw::from_continuous_time(mu, nu, 10);
    REQUIRE(law.atoms().size() == 3);
    double p12 = 0, p21 = 0, p11 = 0;
    for (const auto& a : law.atoms()) {
        if (a.b == 1 && a.h == 2) p12 = a.p;
        if (a.b == 2 && a.h == 1) p21 = a.p;
        if (a.b == 1 && a.h == 1) p11 = a.p;
    }
    CHECK(p12 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p21 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p11 == doctest::Approx(0.8).epsilon(1e-14));

    // exact normalization in rational arithmetic
    Rational sum(0);
    for (const auto& a : law.atoms()) {
        REQUIRE(a.p_exact.has_value());
        sum = sum + *a.p_exact;
    }
    CHECK(sum == Rational(1));

    // N at the boundary 1 + lambda: mu = delta_3, nu = delta_1 gives lambda = 2
    Pmf mu3 = {{3, 0.0, Rational(1)}};
    CHECK_THROWS_AS(BrickLaw::from_continuous_time(mu3, nu, 3), InvalidN);
    CHECK_NOTHROW(BrickLaw::from_continuous_time(mu3, nu, 4));
}

TEST_CASE("continuous-time sigma^2 closed form and limit") {
    // sigma_N^2 = (E[(mu-1)^2] + lambda E[nu^2]) / (N + lambda E[nu]),
    // so sigma_N^2 / ln(N/(N-1)) converges to E[(mu-1)^2] + lambda E[nu^2].
    Pmf mu = {{2, 0.0, Rational(1, 2)}, {3, 0.0, Rational(1, 2)}};
    Pmf nu = {{1, 0.0, Rational(2, 3)}, {2, 0.0, Rational(1, 3)}};
    const double emu = 2.5, enu = 4.0 / 3.0;
    const double emu1sq = 0.5 * 1 + 0.5 * 4;      // E[(mu-1)^2]
    const double enu2 = 2.0 / 3.0 + 4.0 / 3.0;    // E[nu^2]
    const double lambda = (emu - 1.0) / enu;
    const double limit = emu1sq + lambda * enu2;

    double prev_err = 1e9;
    for (std::int64_t n : {10, 100, 10000}) {
        auto law = BrickLaw::from_continuous_time(mu, nu, n);
        const double closed =
            (emu1sq + lambda * enu2) / (static_cast<double>(n) + lambda * enu);
        CHECK(std::abs(law.sigma_sq() - closed) < 1e-12);

        const double ell = std::log(static_cast<double>(n) /
                                    static_cast<double>(n - 1));
        const double err = std::abs(law.sigma_sq() / ell - limit) / limit;
        CHECK(err < prev_err);  // monotone approach
        prev_err = err;
    }
    CHECK(prev_err < 0.01);  // within 1% at N = 10^4
}
