#include "brickwall/alias_table.hpp"

#include <stdexcept>

namespace brickwall {

void AliasTable::build(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("alias table needs at least one weight");

    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("alias table weight must be >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("alias table total weight must be > 0");

    accept_.assign(n, UINT64_MAX);
    alias_.assign(n, 0);
    size_ = n;

    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;

    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

    auto to_threshold = [](double p) {
        return p >= 1.0 ? UINT64_MAX
                        : static_cast<std::uint64_t>(p * 0x1.0p64);
    };

    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        const std::uint32_t l = large.back();
        small.pop_back();
        large.pop_back();
        accept_[s] = to_threshold(scaled[s]);
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers are probability 1 up to rounding.
    for (std::uint32_t i : large) accept_[i] = UINT64_MAX;
    for (std::uint32_t i : small) accept_[i] = UINT64_MAX;
}

}  // namespace brickwall
