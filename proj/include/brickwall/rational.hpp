#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace brickwall {

// Small exact rational on int64, used for criticality checks when atom
// probabilities are given as fractions ("1/3"). Intermediate products go
// through __int128; anything that would still overflow throws, and callers
// fall back to floating point with a tolerance.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (d == 0) throw std::invalid_argument("rational with zero denominator");
        normalize();
    }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from128(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(i128(a.num) * b.num, i128(a.den) * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::invalid_argument("rational division by zero");
        return from128(i128(a.num) * b.den, i128(a.den) * b.num);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

  private:
    using i128 = __int128;

    static Rational from128(i128 n, i128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("rational arithmetic overflow");
        Rational r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
};

// Parses "3", "0.25" or "1/3". Decimal strings become exact rationals over a
// power of ten so that config files keep criticality exact when they can.
Rational parse_rational(const std::string& text);

}  // namespace brickwall
