#pragma once

#include <cstdint>

// Shared constants for the scalar and AVX2 kernel variants. Both evaluate the
// same polynomials in the same order; keep this file the single source of
// truth so the backends cannot drift apart.

namespace brickwall::kern::detail {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;  // ln2 split,
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;  // hi + lo = ln 2
inline constexpr double kSqrtHalf = 0.70710678118654752440;

// atanh series for log: log(m) = 2s(1 + s^2/3 + s^4/5 + ...), s = (m-1)/(m+1),
// m in (sqrt(1/2), sqrt(2)], so s^2 <= 0.0295 and ten terms reach ~1e-17.
inline constexpr double kLogC[10] = {
    1.0 / 3,  1.0 / 5,  1.0 / 7,  1.0 / 9,  1.0 / 11,
    1.0 / 13, 1.0 / 15, 1.0 / 17, 1.0 / 19, 1.0 / 21,
};

// cos(z) Taylor coefficients 1/(2k)!, z in [0, pi/2]; the first dropped term
// z^24/24! is ~ 4e-19 at z = pi/2.
inline constexpr double kCosC[12] = {
    1.0,
    -1.0 / 2,
    1.0 / 24,
    -1.0 / 720,
    1.0 / 40320,
    -1.0 / 3628800,
    1.0 / 479001600,
    -1.0 / 87178291200.0,
    1.0 / 20922789888000.0,
    -1.0 / 6402373705728000.0,
    1.0 / 2432902008176640000.0,
    -1.0 / 1124000727777607680000.0,
};

// xoshiro256++ lane update; identical to brickwall::Xoshiro256 but exposed on
// raw state words so the AVX2 variant can run four lanes per register.
inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

inline std::uint64_t xoshiro_next(std::uint64_t s[4]) {
    const std::uint64_t result = rotl64(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl64(s[3], 45);
    return result;
}

// Uniforms carry 52 random bits so that the integer-to-double conversion has
// an exact branch-free AVX2 counterpart.
inline double u01(std::uint64_t x) {
    return static_cast<double>(x >> 12) * 0x1.0p-52;
}

inline double u01_pos(std::uint64_t x) {
    return (static_cast<double>(x >> 12) + 1.0) * 0x1.0p-52;
}

}  // namespace brickwall::kern::detail
