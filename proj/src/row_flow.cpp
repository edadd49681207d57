#include "brickwall/row_flow.hpp"

#include <algorithm>
#include <stdexcept>

#include "brickwall/errors.hpp"

namespace brickwall {

namespace {

constexpr std::int64_t kSpanLimit = std::int64_t{1} << 55;

void check_span(std::int64_t n) {
    if (n > kSpanLimit)
        throw OverflowError("population span " + std::to_string(n) +
                            " exceeds the 2^55 guard");
}

}  // namespace

std::int64_t RowRealization::psi(std::int64_t x) const {
    // First brick j with s[j+1] > x.
    auto it = std::upper_bound(s.begin() + 1, s.end(), x);
    if (it == s.end())
        throw WindowTooSmall("psi(" + std::to_string(x) + ") beyond sampled row");
    const std::size_t j = static_cast<std::size_t>(it - s.begin()) - 1;
    return t[j];
}

RowRealization RowRealization::anchored(Brick root, std::int64_t anchor,
                                        std::int64_t u, std::int64_t top_origin) {
    RowRealization row;
    row.root_index = 0;
    row.s = {anchor - u, anchor - u + root.bottom};
    row.t = {top_origin, top_origin + root.top};
    return row;
}

void RowRealization::push_right(Brick b) {
    s.push_back(s.back() + b.bottom);
    t.push_back(t.back() + b.top);
}

RowRealization sample_row_over(const BrickLaw& law, std::int64_t leftmost,
                               std::int64_t rightmost, Xoshiro256& rng) {
    if (leftmost > rightmost)
        throw std::invalid_argument("sample_row_over: leftmost > rightmost");
    check_span(rightmost - leftmost);

    const Brick root = law.sample_root(rng);
    const std::int64_t u =
        static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(root.bottom)));
    RowRealization row = RowRealization::anchored(root, leftmost, u);
    while (row.s.back() <= rightmost) row.push_right(law.sample(rng));
    return row;
}

FlowState FlowState::initial(std::vector<std::int64_t> endpoints) {
    if (endpoints.size() < 2)
        throw std::invalid_argument("flow state needs at least 2 endpoints");
    for (std::size_t i = 1; i < endpoints.size(); ++i)
        if (endpoints[i] <= endpoints[i - 1])
            throw std::invalid_argument("flow state endpoints must be increasing");
    check_span(endpoints.back() - endpoints.front());
    FlowState st;
    st.endpoints = std::move(endpoints);
    return st;
}

FlowState flow_step(const FlowState& state, const BrickLaw& law, Xoshiro256& rng) {
    const RowRealization row =
        sample_row_over(law, state.endpoints.front(), state.endpoints.back(), rng);

    FlowState next;
    next.generation = state.generation + 1;
    next.endpoints.reserve(state.endpoints.size());
    // Endpoints are nondecreasing, so walk the row once.
    std::size_t j = 0;
    for (const std::int64_t x : state.endpoints) {
        while (row.s[j + 1] <= x) ++j;
        next.endpoints.push_back(row.t[j]);
    }
    check_span(next.total());
    return next;
}

std::int64_t one_step_population(const BrickLaw& law, std::int64_t n,
                                 Xoshiro256& rng) {
    if (n < 1) throw std::invalid_argument("one_step_population: n must be >= 1");
    check_span(n);

    const Brick root = law.sample_root(rng);
    // Right boundary of the covering brick relative to the left endpoint.
    std::int64_t r = root.bottom - static_cast<std::int64_t>(
                                       rng.below(static_cast<std::uint64_t>(root.bottom)));
    if (r > n) return 0;
    std::int64_t pop = root.top;
    for (;;) {
        const Brick b = law.sample(rng);
        r += b.bottom;
        if (r > n) break;
        pop += b.top;
    }
    check_span(pop);
    return pop;
}

}  // namespace brickwall
