#pragma once

#include <cstdint>
#include <vector>

#include "brickwall/brick_law.hpp"
#include "brickwall/rng.hpp"

namespace brickwall {

// A finite run of bricks from one stationary row. Brick k has bottom span
// [s[k], s[k+1]) and top span [t[k], t[k+1]); both arrays are strictly
// increasing and tile contiguously.
struct RowRealization {
    std::vector<std::int64_t> s;  // bottom boundaries, size brick_count()+1
    std::vector<std::int64_t> t;  // top boundaries, same size
    std::size_t root_index = 0;   // the rho*-drawn brick

    std::size_t brick_count() const { return s.size() - 1; }

    // Endpoint flow map: top-left abscissa of the first brick whose bottom
    // right boundary exceeds x. Children of a slice (x, y] are exactly the
    // tops of bricks whose right boundary lies in (x, y], so one generation of
    // slice populations is psi(y) - psi(x).
    std::int64_t psi(std::int64_t x) const;

    // Builds a row from explicit bricks; used by tests and the strip builder.
    // Brick `root` covers `anchor` with offset u (bottom-left at anchor - u),
    // top-left pinned at top_origin.
    static RowRealization anchored(Brick root, std::int64_t anchor, std::int64_t u,
                                   std::int64_t top_origin = 0);

    void push_right(Brick b);
};

// Minimal contiguous run of bricks whose bottom spans cover
// [leftmost, rightmost]: the brick covering `leftmost` has rho*-distributed
// dimensions with a uniform offset (the stationary renewal spread brick),
// then iid bricks rightward until the right boundary exceeds `rightmost`.
// Tops are anchored with the covering brick's top-left at 0; only differences
// of psi are meaningful.
RowRealization sample_row_over(const BrickLaw& law, std::int64_t leftmost,
                               std::int64_t rightmost, Xoshiro256& rng);

// Endpoints of a tuple of adjacent slices at one generation. Nondecreasing;
// equal neighbours mean the slice between them is dead (dead slices stay
// dead, which is the absorption of the population chain).
struct FlowState {
    std::int64_t generation = 0;
    std::vector<std::int64_t> endpoints;

    static FlowState initial(std::vector<std::int64_t> endpoints);

    std::size_t slice_count() const { return endpoints.size() - 1; }
    std::int64_t population(std::size_t slice) const {
        return endpoints[slice + 1] - endpoints[slice];
    }
    std::int64_t total() const { return endpoints.back() - endpoints.front(); }
    bool all_dead() const { return total() == 0; }
};

// One generation of the discrete flow: samples a fresh stationary row over
// the endpoint span (re-anchoring is justified by shift invariance of the
// wall) and maps every endpoint through psi.
FlowState flow_step(const FlowState& state, const BrickLaw& law, Xoshiro256& rng);

// Single-slice fast path for M_1([0,n[): no row materialization, just the
// renewal walk over the slice.
std::int64_t one_step_population(const BrickLaw& law, std::int64_t n,
                                 Xoshiro256& rng);

}  // namespace brickwall
