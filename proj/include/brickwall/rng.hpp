#pragma once

#include <array>
#include <cstdint>

namespace brickwall {

// SplitMix64, used only to expand seeds into generator state.
// See https://prng.di.unimi.it
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna). One instance per replica / lane; never
// shared between threads.
class Xoshiro256 {
  public:
    Xoshiro256() : Xoshiro256(0, 0) {}

    // Splittable seeding: stream `stream_id` of master seed `seed`. Distinct
    // (seed, stream_id) pairs give statistically independent streams, which is
    // how replicas are decorrelated while staying reproducible.
    Xoshiro256(std::uint64_t seed, std::uint64_t stream_id) {
        SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ull * (stream_id + 1)));
        for (auto& s : s_) s = sm();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe argument for log().
    double uniform_pos() {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform integer in {0, ..., n-1}. Lemire's multiply-shift; the slight
    // modulo bias (< 2^-64 * n) is irrelevant at our sample sizes.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    const std::array<std::uint64_t, 4>& state() const { return s_; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_;
};

}  // namespace brickwall
