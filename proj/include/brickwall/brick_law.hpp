#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brickwall/alias_table.hpp"
#include "brickwall/errors.hpp"
#include "brickwall/rational.hpp"
#include "brickwall/rng.hpp"

namespace brickwall {

struct Brick {
    std::int64_t bottom = 0;  // B: individuals consumed
    std::int64_t top = 0;     // H: individuals produced
};

// One (b, h, p) entry of a finite-support brick distribution. `p_exact` is
// set when the probability was given as a fraction, in which case criticality
// and normalization are checked in exact arithmetic.
struct Atom {
    std::int64_t b = 1;
    std::int64_t h = 1;
    double p = 0.0;
    std::optional<Rational> p_exact;
};

struct PmfEntry {
    std::int64_t value = 0;
    double p = 0.0;
    std::optional<Rational> p_exact;
};

using Pmf = std::vector<PmfEntry>;

enum class LawChecks { strict, none };

class BrickLaw;
struct BiasedLaws;
BiasedLaws size_biased(const BrickLaw& law);

// Distribution of a brick (B, H) on Z_{>0}^2, critical (E[B] = E[H] = Z),
// with finite third moments and at least one atom with b != h.
//
// Two representations are supported:
//   - a finite list of atoms (the canonical form);
//   - the product family with a geometric bottom marginal, which is what a
//     critical offspring distribution induces (bottom Geom(1-p0) on {1,2,...},
//     top (p | p>0)). The geometric side is sampled by exact inverse
//     transform and its moments are closed-form; it is never truncated.
//
// Immutable after construction; safe to share across threads. Samplers take
// the caller's generator.
class BrickLaw {
  public:
    static BrickLaw from_atoms(std::vector<Atom> atoms,
                               LawChecks checks = LawChecks::strict);

    // Brick law of a critical offspring distribution `p` on {0,1,2,...}:
    // bottom = Geom(1 - p(0)), top = (p | p > 0), independent. The resulting
    // sigma^2 equals Var(p).
    static BrickLaw from_bgw(const Pmf& offspring);

    // Discretization of the continuous-time birth/death model with birth
    // sizes mu on {2,3,...} and kill counts nu on {1,2,...}, N time slices per
    // unit rate: atoms (1,k) -> mu(k)/N, (k,1) -> (lambda/N) nu(k-1),
    // (1,1) -> 1 - 1/N - lambda/N, with lambda = (E[mu]-1)/E[nu] so that the
    // law is critical.
    static BrickLaw from_continuous_time(const Pmf& mu, const Pmf& nu,
                                         std::int64_t n_steps);

    // Law of (H, B): swaps bottom and top. Preserves Z and sigma^2.
    BrickLaw transpose() const;

    double z() const { return z_; }
    double sigma_sq() const { return sigma_sq_; }

    // Raw marginal moments E[B^k], E[H^k] for k in {1,2,3}.
    double moment_b(int k) const;
    double moment_h(int k) const;

    bool finite_support() const { return kind_ == Kind::finite; }
    const std::vector<Atom>& atoms() const;

    // Largest bottom value, or nullopt when the bottom marginal is geometric.
    std::optional<std::int64_t> bottom_bound() const;

    // Sampling is the Monte Carlo inner loop; keep it inline.
    Brick sample(Xoshiro256& rng) const {
        if (kind_ == Kind::finite) return flat_[rho_alias_.sample(rng)];
        if (!transposed_)
            return {sample_geom(rng), eta_flat_[eta_alias_.sample(rng)]};
        return {eta_flat_[eta_alias_.sample(rng)], sample_geom(rng)};
    }

    // Bottom-biased law rho*(i,j) = i rho(i,j) / Z: the dimensions of the
    // brick covering a fixed edge of a stationary row.
    Brick sample_root(Xoshiro256& rng) const {
        if (kind_ == Kind::finite) return flat_[rho_star_alias_.sample(rng)];
        if (!transposed_)
            // rho* = sizebias(geom) x eta for a product law
            return {sample_geom(rng) + sample_geom(rng) - 1,
                    eta_flat_[eta_alias_.sample(rng)]};
        return {eta_flat_[eta_star_alias_.sample(rng)], sample_geom(rng)};
    }

    std::string describe() const;

    friend BiasedLaws size_biased(const BrickLaw& law);

  private:
    enum class Kind { finite, geom_product };

    BrickLaw() = default;

    void finalize_finite(LawChecks checks);
    void finalize_geom_product();

    Kind kind_ = Kind::finite;

    // finite
    std::vector<Atom> atoms_;
    std::vector<Brick> flat_;    // atom (b,h) pairs, tight layout for sampling
    AliasTable rho_alias_;       // weights p
    AliasTable rho_star_alias_;  // weights b * p

    // geom_product: bottom Geom(1-p0) on {1,2,...} x top eta (finite), or the
    // transpose of that when `transposed_`.
    double p0_ = 0.0;
    double inv_log_p0_ = 0.0;
    std::vector<PmfEntry> eta_;
    std::vector<std::int64_t> eta_flat_;
    AliasTable eta_alias_;
    AliasTable eta_star_alias_;  // weights value * p, bottom marginal of the transpose
    bool transposed_ = false;

    double z_ = 0.0;
    double sigma_sq_ = 0.0;
    double mb_[3] = {0, 0, 0};  // E[B], E[B^2], E[B^3]
    double mh_[3] = {0, 0, 0};

    // Exact inverse transform for Geom(1-p0) on {1,2,...}.
    std::int64_t sample_geom(Xoshiro256& rng) const {
        const double u = rng.uniform_pos();
        const std::int64_t k =
            1 + static_cast<std::int64_t>(std::log(u) * inv_log_p0_);
        return k < 1 ? 1 : k;
    }
};

// The three bottom-biased laws derived from rho: rho*(i,j) = i rho(i,j)/Z,
// beta*(i) = i beta(i)/Z, eta*(j) = sum_i i rho(i,j)/Z. For the geometric
// family the entries enumerate the parametric law down to tail mass < 1e-13
// (inspection and testing only; samplers never truncate).
struct BiasedLaws {
    std::vector<Atom> rho_star;
    Pmf beta_star;
    Pmf eta_star;
};

BiasedLaws size_biased(const BrickLaw& law);

// Convenience for tests and configs.
BrickLaw make_brick_law(std::vector<Atom> atoms, LawChecks checks = LawChecks::strict);

}  // namespace brickwall
