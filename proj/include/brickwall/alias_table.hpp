#pragma once

#include <cstdint>
#include <vector>

#include "brickwall/rng.hpp"

namespace brickwall {

// Walker alias table (Vose construction): O(1) per draw. This is the inner
// loop of every brick-wall simulation, so the draw path is a single 64-bit
// generator call split into a slot index and a threshold fraction.
class AliasTable {
  public:
    AliasTable() = default;

    explicit AliasTable(const std::vector<double>& weights) { build(weights); }

    void build(const std::vector<double>& weights);

    std::uint32_t sample(Xoshiro256& rng) const {
        const std::uint64_t x = rng();
        const std::uint64_t k = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x) * size_) >> 64);
        // Low bits of x*size_ are the fractional slot coordinate; slot pick
        // and threshold test stay in integer arithmetic (branch-free).
        const std::uint64_t frac = x * size_;
        return frac < accept_[k] ? static_cast<std::uint32_t>(k) : alias_[k];
    }

    std::size_t size() const { return size_; }

  private:
    std::vector<std::uint64_t> accept_;  // acceptance thresholds, 2^64 scale
    std::vector<std::uint32_t> alias_;
    std::uint64_t size_ = 0;
};

}  // namespace brickwall
