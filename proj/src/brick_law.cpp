#include "brickwall/brick_law.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace brickwall {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kCriticalRelTol = 1e-9;

bool all_exact(const std::vector<Atom>& atoms) {
    for (const auto& a : atoms)
        if (!a.p_exact) return false;
    return true;
}

bool all_exact(const Pmf& pmf) {
    for (const auto& e : pmf)
        if (!e.p_exact) return false;
    return true;
}

double pmf_mean(const Pmf& pmf) {
    double m = 0.0;
    for (const auto& e : pmf) m += static_cast<double>(e.value) * e.p;
    return m;
}

double pmf_moment(const Pmf& pmf, int k) {
    double m = 0.0;
    for (const auto& e : pmf) m += std::pow(static_cast<double>(e.value), k) * e.p;
    return m;
}

void materialize(Pmf& pmf) {
    for (auto& e : pmf)
        if (e.p_exact) e.p = e.p_exact->to_double();
}

void check_pmf_basics(const Pmf& pmf, std::int64_t min_value, const char* what) {
    if (pmf.empty()) throw NotAProbability(std::string(what) + ": empty pmf");
    double sum = 0.0;
    for (const auto& e : pmf) {
        if (e.value < min_value)
            throw NotAProbability(std::string(what) + ": value below support");
        if (!(e.p > 0.0)) throw NotAProbability(std::string(what) + ": p must be > 0");
        sum += e.p;
    }
    if (all_exact(pmf)) {
        Rational s(0);
        for (const auto& e : pmf) s = s + *e.p_exact;
        if (!(s == Rational(1)))
            throw NotAProbability(std::string(what) + ": probabilities do not sum to 1");
    } else if (std::abs(sum - 1.0) > kSumTol) {
        throw NotAProbability(std::string(what) + ": probabilities sum to " +
                              std::to_string(sum));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Finite-support laws
// ---------------------------------------------------------------------------

BrickLaw BrickLaw::from_atoms(std::vector<Atom> atoms, LawChecks checks) {
    BrickLaw law;
    law.kind_ = Kind::finite;
    law.atoms_ = std::move(atoms);
    law.finalize_finite(checks);
    return law;
}

BrickLaw make_brick_law(std::vector<Atom> atoms, LawChecks checks) {
    return BrickLaw::from_atoms(std::move(atoms), checks);
}

void BrickLaw::finalize_finite(LawChecks checks) {
    if (atoms_.empty()) throw NotAProbability("brick law: empty atom list");

    // Exact probabilities take precedence over their float rendering.
    for (auto& a : atoms_)
        if (a.p_exact) a.p = a.p_exact->to_double();

    double sum = 0.0;
    bool nondegenerate = false;
    for (const auto& a : atoms_) {
        if (a.b < 1 || a.h < 1)
            throw NotAProbability("brick law: b and h must be >= 1");
        if (!(a.p > 0.0)) throw NotAProbability("brick law: p must be > 0");
        sum += a.p;
        if (a.b != a.h) nondegenerate = true;
    }

    if (checks == LawChecks::strict) {
        if (all_exact(atoms_)) {
            Rational s(0);
            for (const auto& a : atoms_) s = s + *a.p_exact;
            if (!(s == Rational(1)))
                throw NotAProbability("brick law: probabilities do not sum to 1");
            Rational eb(0), eh(0);
            for (const auto& a : atoms_) {
                eb = eb + Rational(a.b) * *a.p_exact;
                eh = eh + Rational(a.h) * *a.p_exact;
            }
            if (!(eb == eh))
                throw NotCritical("brick law: E[B] != E[H] (exact arithmetic)");
        } else {
            if (std::abs(sum - 1.0) > kSumTol)
                throw NotAProbability("brick law: probabilities sum to " +
                                      std::to_string(sum));
            double eb = 0.0, eh = 0.0;
            for (const auto& a : atoms_) {
                eb += static_cast<double>(a.b) * a.p;
                eh += static_cast<double>(a.h) * a.p;
            }
            if (std::abs(eb - eh) > kCriticalRelTol * std::max(1.0, std::abs(eb)))
                throw NotCritical("brick law: E[B] = " + std::to_string(eb) +
                                  " but E[H] = " + std::to_string(eh));
        }
        if (!nondegenerate)
            throw Degenerate("brick law: B = H on every atom");
    }

    for (int k = 1; k <= 3; ++k) {
        double b = 0.0, h = 0.0;
        for (const auto& a : atoms_) {
            b += std::pow(static_cast<double>(a.b), k) * a.p;
            h += std::pow(static_cast<double>(a.h), k) * a.p;
        }
        mb_[k - 1] = b;
        mh_[k - 1] = h;
    }
    z_ = mb_[0];

    double s2 = 0.0;
    for (const auto& a : atoms_) {
        const double d = static_cast<double>(a.h - a.b);
        s2 += d * d * a.p;
    }
    sigma_sq_ = s2 / z_;

    flat_.clear();
    for (const auto& a : atoms_) flat_.push_back({a.b, a.h});

    std::vector<double> w(atoms_.size()), wstar(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        w[i] = atoms_[i].p;
        wstar[i] = static_cast<double>(atoms_[i].b) * atoms_[i].p;
    }
    rho_alias_.build(w);
    rho_star_alias_.build(wstar);
}

// ---------------------------------------------------------------------------
// Offspring-distribution special case (independent geometric bottom)
// ---------------------------------------------------------------------------

BrickLaw BrickLaw::from_bgw(const Pmf& offspring_in) {
    Pmf offspring = offspring_in;
    materialize(offspring);
    check_pmf_basics(offspring, 0, "offspring");

    double p0 = 0.0;
    for (const auto& e : offspring)
        if (e.value == 0) p0 += e.p;
    if (!(p0 > 0.0)) throw ZeroP0("offspring: p(0) = 0 gives no deaths");

    if (all_exact(offspring)) {
        Rational mean(0);
        for (const auto& e : offspring) mean = mean + Rational(e.value) * *e.p_exact;
        if (!(mean == Rational(1)))
            throw NotCritical("offspring: mean != 1 (exact arithmetic)");
    } else {
        const double mean = pmf_mean(offspring);
        if (std::abs(mean - 1.0) > kCriticalRelTol)
            throw NotCritical("offspring: mean = " + std::to_string(mean));
    }

    BrickLaw law;
    law.kind_ = Kind::geom_product;
    law.p0_ = p0;
    law.inv_log_p0_ = 1.0 / std::log(p0);

    const double q = 1.0 - p0;
    for (const auto& e : offspring) {
        if (e.value > 0) law.eta_.push_back({e.value, e.p / q, std::nullopt});
    }
    law.finalize_geom_product();
    return law;
}

void BrickLaw::finalize_geom_product() {
    const double q = 1.0 - p0_;

    double geo[3];
    geo[0] = 1.0 / q;
    geo[1] = (1.0 + p0_) / (q * q);
    geo[2] = (1.0 + 4.0 * p0_ + p0_ * p0_) / (q * q * q);

    double eta[3];
    for (int k = 1; k <= 3; ++k) eta[k - 1] = pmf_moment(eta_, k);

    if (!transposed_) {
        for (int i = 0; i < 3; ++i) {
            mb_[i] = geo[i];
            mh_[i] = eta[i];
        }
    } else {
        for (int i = 0; i < 3; ++i) {
            mb_[i] = eta[i];
            mh_[i] = geo[i];
        }
    }
    z_ = mb_[0];
    // Independent marginals: E[(H-B)^2] = E[H^2] - 2 E[H] E[B] + E[B^2].
    sigma_sq_ = (mh_[1] - 2.0 * mh_[0] * mb_[0] + mb_[1]) / z_;

    eta_flat_.clear();
    for (const auto& e : eta_) eta_flat_.push_back(e.value);

    std::vector<double> w(eta_.size()), wstar(eta_.size());
    for (std::size_t i = 0; i < eta_.size(); ++i) {
        w[i] = eta_[i].p;
        wstar[i] = static_cast<double>(eta_[i].value) * eta_[i].p;
    }
    eta_alias_.build(w);
    eta_star_alias_.build(wstar);
}

// ---------------------------------------------------------------------------
// Continuous-time discretization
// ---------------------------------------------------------------------------

BrickLaw BrickLaw::from_continuous_time(const Pmf& mu_in, const Pmf& nu_in,
                                        std::int64_t n_steps) {
    Pmf mu = mu_in, nu = nu_in;
    materialize(mu);
    materialize(nu);
    check_pmf_basics(mu, 2, "mu");
    check_pmf_basics(nu, 1, "nu");
    if (n_steps < 2) throw InvalidN("continuous-time law: N must be >= 2");

    // lambda is the kill-clock rate that balances births and deaths:
    // birth events add E[mu]-1 each, kill events remove E[nu] each, so
    // lambda = (E[mu]-1)/E[nu] makes the discretized law critical.
    const double emu = pmf_mean(mu);
    const double enu = pmf_mean(nu);
    const double lambda = (emu - 1.0) / enu;
    if (!(1.0 + lambda < static_cast<double>(n_steps)))
        throw InvalidN("continuous-time law: need 1 + lambda < N, lambda = " +
                       std::to_string(lambda));

    std::vector<Atom> atoms;
    atoms.reserve(mu.size() + nu.size() + 1);

    if (all_exact(mu) && all_exact(nu)) {
        Rational remu(0), renu(0);
        for (const auto& e : mu) remu = remu + Rational(e.value) * *e.p_exact;
        for (const auto& e : nu) renu = renu + Rational(e.value) * *e.p_exact;
        const Rational rlambda = (remu - Rational(1)) / renu;
        const Rational rN(n_steps);
        for (const auto& e : mu)
            atoms.push_back({1, e.value, 0.0, *e.p_exact / rN});
        for (const auto& e : nu)
            atoms.push_back({e.value + 1, 1, 0.0, rlambda * *e.p_exact / rN});
        const Rational r11 =
            Rational(1) - Rational(1) / rN - rlambda / rN;
        atoms.push_back({1, 1, 0.0, r11});
    } else {
        const double invn = 1.0 / static_cast<double>(n_steps);
        for (const auto& e : mu) atoms.push_back({1, e.value, e.p * invn, std::nullopt});
        for (const auto& e : nu)
            atoms.push_back({e.value + 1, 1, lambda * e.p * invn, std::nullopt});
        atoms.push_back({1, 1, 1.0 - invn - lambda * invn, std::nullopt});
    }

    return from_atoms(std::move(atoms), LawChecks::strict);
}

// ---------------------------------------------------------------------------
// Shared operations
// ---------------------------------------------------------------------------

BrickLaw BrickLaw::transpose() const {
    BrickLaw t = *this;
    if (kind_ == Kind::finite) {
        for (auto& a : t.atoms_) std::swap(a.b, a.h);
        t.finalize_finite(LawChecks::none);  // validity is preserved by the swap
        // sigma^2 is symmetric in (b, h); keep the exact cached value.
        t.sigma_sq_ = sigma_sq_;
    } else {
        t.transposed_ = !transposed_;
        t.finalize_geom_product();
        t.sigma_sq_ = sigma_sq_;
    }
    return t;
}

double BrickLaw::moment_b(int k) const { return mb_[k - 1]; }
double BrickLaw::moment_h(int k) const { return mh_[k - 1]; }

const std::vector<Atom>& BrickLaw::atoms() const {
    if (kind_ != Kind::finite)
        throw std::logic_error("atoms(): law has parametric (geometric) support");
    return atoms_;
}

std::optional<std::int64_t> BrickLaw::bottom_bound() const {
    if (kind_ == Kind::geom_product && !transposed_) return std::nullopt;
    std::int64_t m = 1;
    if (kind_ == Kind::finite) {
        for (const auto& a : atoms_) m = std::max(m, a.b);
    } else {
        for (const auto& e : eta_) m = std::max(m, e.value);
    }
    return m;
}

std::string BrickLaw::describe() const {
    std::ostringstream os;
    if (kind_ == Kind::finite) {
        os << "atoms{";
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (i) os << ", ";
            os << "(" << atoms_[i].b << "," << atoms_[i].h << "):";
            if (atoms_[i].p_exact)
                os << atoms_[i].p_exact->num << "/" << atoms_[i].p_exact->den;
            else
                os << atoms_[i].p;
        }
        os << "}";
    } else {
        os << (transposed_ ? "geom-top{p0=" : "geom-bottom{p0=") << p0_ << ", eta{";
        for (std::size_t i = 0; i < eta_.size(); ++i) {
            if (i) os << ", ";
            os << eta_[i].value << ":" << eta_[i].p;
        }
        os << "}}";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Biased laws
// ---------------------------------------------------------------------------

namespace {

BiasedLaws biased_from_atoms(const std::vector<Atom>& atoms) {
    BiasedLaws out;
    double z = 0.0;
    for (const auto& a : atoms) z += static_cast<double>(a.b) * a.p;

    std::map<std::int64_t, double> beta_star, eta_star;
    for (const auto& a : atoms) {
        const double w = static_cast<double>(a.b) * a.p / z;
        out.rho_star.push_back({a.b, a.h, w, std::nullopt});
        beta_star[a.b] += w;
        eta_star[a.h] += w;
    }
    for (const auto& [v, p] : beta_star) out.beta_star.push_back({v, p, std::nullopt});
    for (const auto& [v, p] : eta_star) out.eta_star.push_back({v, p, std::nullopt});
    return out;
}

}  // namespace

BiasedLaws size_biased(const BrickLaw& law) {
    if (law.finite_support()) return biased_from_atoms(law.atoms());

    // Product family: synthesize an atom list with the geometric marginal
    // enumerated down to negligible tail mass, then bias as usual.
    const double q = 1.0 - law.p0_;
    const int kmax =
        static_cast<int>(std::ceil(std::log(1e-17) * law.inv_log_p0_)) + 32;

    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(kmax) * law.eta_.size());
    for (int k = 1; k <= kmax; ++k) {
        const double pg = q * std::pow(law.p0_, k - 1);
        for (const auto& e : law.eta_) {
            if (!law.transposed_)
                atoms.push_back({k, e.value, pg * e.p, std::nullopt});
            else
                atoms.push_back({e.value, k, pg * e.p, std::nullopt});
        }
    }
    return biased_from_atoms(atoms);
}

}  // namespace brickwall
