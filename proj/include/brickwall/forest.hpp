#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "brickwall/brick_law.hpp"
#include "brickwall/rng.hpp"
#include "brickwall/row_flow.hpp"

namespace brickwall {

// Strip of the wall over levels 0..r (rows 0..r-1). Every row is anchored
// per the stationary construction (root brick bottom-left at (-U_j, j),
// top-left at (0, j+1)) and extended on both sides until bottoms AND tops
// cover [w_lo, w_hi], so every node in the window has a resolvable parent.
struct StripForest {
    std::int64_t r = 0;
    std::int64_t w_lo = 0, w_hi = 0;
    std::vector<RowRealization> rows;

    std::int64_t width() const { return w_hi - w_lo; }
};

StripForest build_strip(const BrickLaw& law, std::int64_t r, std::int64_t w_lo,
                        std::int64_t w_hi, Xoshiro256& rng);

inline constexpr std::int64_t kTaintLabel = INT64_MIN;

// Tree labels inside the window. Primal: label of node (x+1/2, j) is the
// abscissa of its level-0 ancestor, kTaintLabel when the window cannot
// resolve it. `escaped` collects labels whose trees spilled outside the
// window (their death or offspring counts cannot be certified).
struct TreeLabels {
    std::int64_t w_lo = 0, w_hi = 0;
    std::vector<std::vector<std::int64_t>> level;  // [j][x - w_lo]
    std::unordered_set<std::int64_t> escaped;

    std::int64_t at(std::int64_t j, std::int64_t x) const {
        return level[static_cast<std::size_t>(j)][static_cast<std::size_t>(x - w_lo)];
    }
    bool is_escaped(std::int64_t label) const {
        return escaped.count(label) != 0;
    }
};

// Ascending genealogy: children of a brick's bottom-right node are its tops.
TreeLabels propagate_primal_labels(const StripForest& strip);

// Descending genealogy of the dual forest: the dual parent of vertex (x, j)
// is the top-left vertex of the brick covering edge x, one level up. Labels
// flow down from level r.
TreeLabels propagate_dual_labels(const StripForest& strip);

// Survey of the first surviving tree right of the root: I_r is the smallest
// i > 0 whose tree reaches level r, K_r its number of level-r descendants,
// J_r a uniform re-rooting index in {1,...,K_r}.
struct DualSurvey {
    std::int64_t i_r = 0;
    std::int64_t k_r = 0;
    std::int64_t j_r = 0;
};

DualSurvey survey_duality(const StripForest& strip, Xoshiro256& rng);
DualSurvey survey_from_labels(const StripForest& strip, const TreeLabels& primal,
                              Xoshiro256& rng);

// Builds a strip and surveys it, doubling the window (and resampling from
// scratch, to keep the root brick law unbiased) until the survey resolves.
struct SurveyedStrip {
    StripForest strip;
    DualSurvey survey;
};
SurveyedStrip build_surveyed_strip(const BrickLaw& law, std::int64_t r,
                                   Xoshiro256& rng, int max_doublings = 24);

// Per-level node counts of one tree, used by the duality functionals.
struct TreeProfile {
    std::vector<std::int64_t> level_count;  // index = level, 0..r

    std::int64_t height() const {
        for (std::size_t j = level_count.size(); j-- > 0;)
            if (level_count[j] > 0) return static_cast<std::int64_t>(j);
        return -1;  // empty
    }
    std::int64_t count_at(std::int64_t j) const {
        return level_count[static_cast<std::size_t>(j)];
    }
};

// Profile of the primal tree rooted at (i + 1/2, 0). Throws WindowTooSmall
// when the tree escaped the window.
TreeProfile primal_tree_profile(const StripForest& strip, const TreeLabels& primal,
                                std::int64_t i);

// Profile of the dual tree descending from (i, r), flipped upside-down so
// level 0 is the (former) top. Same escape rules.
TreeProfile flipped_dual_tree_profile(const StripForest& strip,
                                      const TreeLabels& dual, std::int64_t i);

// Bounded window statistic for the duality check: sees the trees at indices
// 0..window-1 right of the root (index 0 = the root tree).
struct WindowFunctional {
    std::string name;
    int window = 1;
    std::function<double(std::span<const TreeProfile>)> eval;
};

std::vector<WindowFunctional> duality_functional_battery();

struct DualityCheck {
    double lhs_mean = 0, lhs_lo = 0, lhs_hi = 0;  // E[f(dual side) K_r]
    double rhs_mean = 0, rhs_lo = 0, rhs_hi = 0;  // E[f(primal side of law^T) K_r]
    bool overlap = false;
};

// Monte Carlo check of the re-rooted dual / transposed primal identity:
// E[f(flipped dual of rho) K_r] = E[f(primal of rho^T) K_r^T], each side with
// a `level`-confidence normal interval.
DualityCheck check_duality(const BrickLaw& law, std::int64_t r,
                           const WindowFunctional& f, std::size_t replicas,
                           std::uint64_t seed, int threads, double level = 0.99);

// ---------------------------------------------------------------------------
// Explicit graphs (small strips: re-rooting, export, oracle BFS)
// ---------------------------------------------------------------------------

// Node key: (doubled abscissa, level). Primal nodes have odd first
// coordinate, dual vertices even; the doubling keeps half-integers exact.
using GraphNode = std::pair<std::int64_t, std::int64_t>;

struct ForestGraph {
    std::map<GraphNode, std::vector<GraphNode>> adjacency;  // undirected
    GraphNode root{1, 0};

    void add_edge(GraphNode a, GraphNode b);
    // BFS distance, -1 if disconnected.
    std::int64_t distance(GraphNode a, GraphNode b) const;
};

ForestGraph primal_graph(const StripForest& strip);
ForestGraph dual_graph(const StripForest& strip);

// The transformed dual strip of the re-rooting identity: re-rooted at
// (J_r, r), flipped upside-down, abscissae shifted by 1/2. Vertices (x, j)
// map to primal-style nodes (x + 1/2, r - j); the root is the image of
// (J_r, r).
ForestGraph reroot_dual(const StripForest& strip, const DualSurvey& survey);

// ---------------------------------------------------------------------------
// Meshing
// ---------------------------------------------------------------------------

// Subforest spanned by the mesh nodes (i*m + 1/2, j*m): the mesh nodes plus
// all their primal ancestors down to the grafting line.
struct MeshForest {
    std::int64_t mesh_step = 1;
    std::int64_t w_lo = 0, w_hi = 0;
    std::vector<std::vector<std::uint8_t>> spanned;  // [level][x - w_lo]

    bool contains(std::int64_t j, std::int64_t x) const {
        return spanned[static_cast<std::size_t>(j)]
                      [static_cast<std::size_t>(x - w_lo)] != 0;
    }
    std::size_t node_count() const;
};

MeshForest mesh_subforest(const StripForest& strip, std::int64_t mesh_step);

// One-sided Hausdorff witness: max over nodes of the grafted strip within
// tree distance `radius` of the root of the distance to the grafted mesh
// subforest (spanned nodes plus the whole baseline). Multi-source BFS on the
// explicit graph; upper-bounds the Gromov-Hausdorff distortion because strip
// and mesh share an isometric embedding. Throws WindowTooSmall when the ball
// or its trees touch the window edge.
std::int64_t hausdorff_to_mesh(const StripForest& strip, const MeshForest& mesh,
                               std::int64_t radius);

// Same value computed by two level sweeps (nearest-marked-node DP on each
// tree) instead of an explicit graph; handles acceptance-scale strips.
// Also reports the largest |abscissa| over ball nodes (bounding-box
// statistic).
struct MeshWitness {
    std::int64_t witness = 0;
    std::int64_t max_abscissa = 0;
};
MeshWitness hausdorff_to_mesh_streaming(const StripForest& strip,
                                        std::int64_t mesh_step,
                                        std::int64_t radius);

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

// Line-oriented text: "brick <level> <s> <b> <t> <h>" per brick, then primal
// and dual edge lists in doubled coordinates.
std::string strip_to_text(const StripForest& strip);

// Simple scalable-vector drawing of the strip with the primal forest in blue
// and the dual forest in orange.
std::string strip_to_svg(const StripForest& strip);

}  // namespace brickwall
