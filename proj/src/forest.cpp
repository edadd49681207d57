#include "brickwall/forest.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "brickwall/errors.hpp"
#include "brickwall/parallel.hpp"
#include "brickwall/stats.hpp"

namespace brickwall {

namespace {

constexpr std::int64_t kInf = INT64_MAX / 4;

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
    const std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

// Index of the brick whose bottom span contains edge x (s[k] <= x < s[k+1]).
std::size_t brick_covering_bottom(const RowRealization& row, std::int64_t x) {
    auto it = std::upper_bound(row.s.begin(), row.s.end(), x);
    return static_cast<std::size_t>(it - row.s.begin()) - 1;
}

// Index of the brick whose top span contains x.
std::size_t brick_covering_top(const RowRealization& row, std::int64_t x) {
    auto it = std::upper_bound(row.t.begin(), row.t.end(), x);
    return static_cast<std::size_t>(it - row.t.begin()) - 1;
}

RowRealization sample_row_two_sided(const BrickLaw& law, std::int64_t w_lo,
                                    std::int64_t w_hi, Xoshiro256& rng) {
    const Brick root = law.sample_root(rng);
    const std::int64_t u =
        static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(root.bottom)));

    std::vector<std::int64_t> s_right = {-u, -u + root.bottom};
    std::vector<std::int64_t> t_right = {0, root.top};
    while (s_right.back() < w_hi || t_right.back() < w_hi) {
        const Brick b = law.sample(rng);
        s_right.push_back(s_right.back() + b.bottom);
        t_right.push_back(t_right.back() + b.top);
    }

    std::vector<std::int64_t> s_left, t_left;
    std::int64_t sl = -u, tl = 0;
    while (sl > w_lo || tl > w_lo) {
        const Brick b = law.sample(rng);
        sl -= b.bottom;
        tl -= b.top;
        s_left.push_back(sl);
        t_left.push_back(tl);
    }

    RowRealization row;
    row.s.reserve(s_left.size() + s_right.size());
    row.t.reserve(s_left.size() + t_right.size());
    for (auto it = s_left.rbegin(); it != s_left.rend(); ++it) row.s.push_back(*it);
    row.s.insert(row.s.end(), s_right.begin(), s_right.end());
    for (auto it = t_left.rbegin(); it != t_left.rend(); ++it) row.t.push_back(*it);
    row.t.insert(row.t.end(), t_right.begin(), t_right.end());
    row.root_index = s_left.size();
    return row;
}

}  // namespace

StripForest build_strip(const BrickLaw& law, std::int64_t r, std::int64_t w_lo,
                        std::int64_t w_hi, Xoshiro256& rng) {
    if (r < 1) throw std::invalid_argument("build_strip: r must be >= 1");
    if (w_lo >= w_hi) throw std::invalid_argument("build_strip: empty window");
    StripForest strip;
    strip.r = r;
    strip.w_lo = w_lo;
    strip.w_hi = w_hi;
    strip.rows.reserve(static_cast<std::size_t>(r));
    for (std::int64_t j = 0; j < r; ++j)
        strip.rows.push_back(sample_row_two_sided(law, w_lo, w_hi, rng));
    return strip;
}

// ---------------------------------------------------------------------------
// Label propagation
// ---------------------------------------------------------------------------

TreeLabels propagate_primal_labels(const StripForest& strip) {
    TreeLabels L;
    L.w_lo = strip.w_lo;
    L.w_hi = strip.w_hi;
    const std::int64_t W = strip.width();
    L.level.assign(static_cast<std::size_t>(strip.r + 1),
                   std::vector<std::int64_t>(static_cast<std::size_t>(W), kTaintLabel));
    for (std::int64_t x = 0; x < W; ++x)
        L.level[0][static_cast<std::size_t>(x)] = strip.w_lo + x;

    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        const auto& cur = L.level[static_cast<std::size_t>(j)];
        auto& next = L.level[static_cast<std::size_t>(j + 1)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const std::int64_t p = row.s[k + 1] - 1;  // bottom-right node
            const bool p_in =
                p >= strip.w_lo && p < strip.w_hi;
            const std::int64_t plabel =
                p_in ? cur[static_cast<std::size_t>(p - strip.w_lo)] : kTaintLabel;
            const std::int64_t clo = row.t[k], chi = row.t[k + 1];
            if (plabel != kTaintLabel && (clo < strip.w_lo || chi > strip.w_hi))
                L.escaped.insert(plabel);
            const std::int64_t lo = std::max(clo, strip.w_lo);
            const std::int64_t hi = std::min(chi, strip.w_hi);
            for (std::int64_t c = lo; c < hi; ++c)
                next[static_cast<std::size_t>(c - strip.w_lo)] = plabel;
        }
    }
    return L;
}

TreeLabels propagate_dual_labels(const StripForest& strip) {
    TreeLabels L;
    L.w_lo = strip.w_lo;
    L.w_hi = strip.w_hi;
    const std::int64_t W = strip.width();
    L.level.assign(static_cast<std::size_t>(strip.r + 1),
                   std::vector<std::int64_t>(static_cast<std::size_t>(W), kTaintLabel));
    for (std::int64_t x = 0; x < W; ++x)
        L.level[static_cast<std::size_t>(strip.r)][static_cast<std::size_t>(x)] =
            strip.w_lo + x;

    for (std::int64_t j = strip.r - 1; j >= 0; --j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        const auto& above = L.level[static_cast<std::size_t>(j + 1)];
        auto& cur = L.level[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            // Dual parent of bottom vertices [s[k], s[k+1]) is the brick's
            // top-left vertex (the right-most bottom vertex is excluded,
            // being the left-most of the next brick).
            const std::int64_t parent = row.t[k];
            const bool p_in = parent >= strip.w_lo && parent < strip.w_hi;
            const std::int64_t plabel =
                p_in ? above[static_cast<std::size_t>(parent - strip.w_lo)]
                     : kTaintLabel;
            const std::int64_t clo = row.s[k], chi = row.s[k + 1];
            if (plabel != kTaintLabel && (clo < strip.w_lo || chi > strip.w_hi))
                L.escaped.insert(plabel);
            const std::int64_t lo = std::max(clo, strip.w_lo);
            const std::int64_t hi = std::min(chi, strip.w_hi);
            for (std::int64_t c = lo; c < hi; ++c)
                cur[static_cast<std::size_t>(c - strip.w_lo)] = plabel;
        }
    }
    return L;
}

// ---------------------------------------------------------------------------
// Survey
// ---------------------------------------------------------------------------

DualSurvey survey_from_labels(const StripForest& strip, const TreeLabels& primal,
                              Xoshiro256& rng) {
    const auto& top = primal.level[static_cast<std::size_t>(strip.r)];
    std::map<std::int64_t, std::int64_t> counts;
    for (std::size_t xi = 0; xi < top.size(); ++xi) {
        const std::int64_t lab = top[xi];
        if (lab != kTaintLabel && lab > 0) ++counts[lab];
    }

    std::int64_t i_r = 0;
    for (const auto& [lab, cnt] : counts) {
        if (primal.is_escaped(lab))
            throw WindowTooSmall("survey: first surviving tree escaped the window");
        i_r = lab;
        break;
    }
    if (i_r == 0)
        throw WindowTooSmall("survey: no surviving tree right of the root in window");

    // Certify that every tree strictly between the root and i_r really died:
    // an escaped tree may have level-r offspring outside the window.
    for (std::int64_t i = 1; i < i_r; ++i)
        if (primal.is_escaped(i))
            throw WindowTooSmall("survey: undetermined tree left of I_r");

    DualSurvey survey;
    survey.i_r = i_r;
    survey.k_r = counts[i_r];
    survey.j_r =
        1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(survey.k_r)));
    return survey;
}

DualSurvey survey_duality(const StripForest& strip, Xoshiro256& rng) {
    return survey_from_labels(strip, propagate_primal_labels(strip), rng);
}

SurveyedStrip build_surveyed_strip(const BrickLaw& law, std::int64_t r,
                                   Xoshiro256& rng, int max_doublings) {
    std::int64_t lo = -4;
    std::int64_t hi = std::max<std::int64_t>(24, 8 * r);
    for (int attempt = 0; attempt <= max_doublings; ++attempt) {
        StripForest strip = build_strip(law, r, lo, hi, rng);
        try {
            DualSurvey survey = survey_duality(strip, rng);
            return {std::move(strip), survey};
        } catch (const WindowTooSmall&) {
            lo *= 2;
            hi *= 2;
        }
    }
    throw WindowTooSmall("build_surveyed_strip: window kept overflowing");
}

// ---------------------------------------------------------------------------
// Tree profiles and the duality check
// ---------------------------------------------------------------------------

namespace {

std::vector<TreeProfile> profiles_for_labels(const StripForest& strip,
                                             const TreeLabels& labels,
                                             std::int64_t first, std::int64_t count,
                                             bool flipped) {
    for (std::int64_t i = first; i < first + count; ++i) {
        if (i < labels.w_lo || i >= labels.w_hi)
            throw WindowTooSmall("tree profile: index outside window");
        if (labels.is_escaped(i))
            throw WindowTooSmall("tree profile: tree escaped the window");
    }
    std::vector<TreeProfile> out(static_cast<std::size_t>(count));
    for (auto& p : out)
        p.level_count.assign(static_cast<std::size_t>(strip.r + 1), 0);
    for (std::int64_t j = 0; j <= strip.r; ++j) {
        const auto& lv = labels.level[static_cast<std::size_t>(j)];
        const std::int64_t out_level = flipped ? strip.r - j : j;
        for (std::size_t xi = 0; xi < lv.size(); ++xi) {
            const std::int64_t lab = lv[xi];
            if (lab >= first && lab < first + count)
                ++out[static_cast<std::size_t>(lab - first)]
                      .level_count[static_cast<std::size_t>(out_level)];
        }
    }
    return out;
}

}  // namespace

TreeProfile primal_tree_profile(const StripForest& strip, const TreeLabels& primal,
                                std::int64_t i) {
    return profiles_for_labels(strip, primal, i, 1, false)[0];
}

TreeProfile flipped_dual_tree_profile(const StripForest& strip,
                                      const TreeLabels& dual, std::int64_t i) {
    return profiles_for_labels(strip, dual, i, 1, true)[0];
}

std::vector<WindowFunctional> duality_functional_battery() {
    std::vector<WindowFunctional> fs;
    fs.push_back({"unit", 1, [](std::span<const TreeProfile>) { return 1.0; }});
    fs.push_back({"root_tree_height", 1, [](std::span<const TreeProfile> t) {
                      return static_cast<double>(t[0].height());
                  }});
    fs.push_back({"top_count_3", 3, [](std::span<const TreeProfile> t) {
                      double c = 0;
                      const std::int64_t r =
                          static_cast<std::int64_t>(t[0].level_count.size()) - 1;
                      for (const auto& tp : t)
                          c += static_cast<double>(tp.count_at(r));
                      return c;
                  }});
    fs.push_back({"tree1_survives", 2, [](std::span<const TreeProfile> t) {
                      const std::int64_t r =
                          static_cast<std::int64_t>(t[0].level_count.size()) - 1;
                      return t[1].count_at(r) > 0 ? 1.0 : 0.0;
                  }});
    return fs;
}

namespace {

// One weighted-functional draw per replica. side = dual: f(flipped dual
// strip re-rooted at J_r) * K_r; side = primal: f(primal trees right of the
// root) * K_r.
enum class DualitySide { dual, primal };

std::vector<double> duality_samples(const BrickLaw& law, std::int64_t r,
                                    const WindowFunctional& f, DualitySide side,
                                    std::size_t replicas, std::uint64_t seed,
                                    int threads) {
    std::vector<double> values(replicas);
    parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t rep = begin; rep < end; ++rep) {
            Xoshiro256 rng(seed, rep);
            std::int64_t lo = -4 - f.window;
            std::int64_t hi = std::max<std::int64_t>(24, 8 * r) + 4 * f.window;
            for (;;) {
                try {
                    StripForest strip = build_strip(law, r, lo, hi, rng);
                    const TreeLabels primal = propagate_primal_labels(strip);
                    const DualSurvey survey = survey_from_labels(strip, primal, rng);
                    std::vector<TreeProfile> trees;
                    if (side == DualitySide::dual) {
                        const TreeLabels dual = propagate_dual_labels(strip);
                        trees = profiles_for_labels(strip, dual, survey.j_r,
                                                    f.window, true);
                    } else {
                        trees =
                            profiles_for_labels(strip, primal, 0, f.window, false);
                    }
                    values[rep] =
                        f.eval(trees) * static_cast<double>(survey.k_r);
                    break;
                } catch (const WindowTooSmall&) {
                    lo *= 2;
                    hi *= 2;
                    if (hi > (std::int64_t{1} << 32))
                        throw OverflowError("duality window runaway");
                }
            }
        }
    });
    return values;
}

}  // namespace

DualityCheck check_duality(const BrickLaw& law, std::int64_t r,
                           const WindowFunctional& f, std::size_t replicas,
                           std::uint64_t seed, int threads, double level) {
    const auto lhs = duality_samples(law, r, f, DualitySide::dual, replicas,
                                     seed, threads);
    const auto rhs = duality_samples(law.transpose(), r, f, DualitySide::primal,
                                     replicas, seed ^ 0x9e3779b97f4a7c15ull,
                                     threads);
    DualityCheck out;
    const auto ls = stats::summarize(lhs);
    const auto rs = stats::summarize(rhs);
    const auto lci = stats::normal_ci(ls, level);
    const auto rci = stats::normal_ci(rs, level);
    out.lhs_mean = ls.mean;
    out.lhs_lo = lci.lo;
    out.lhs_hi = lci.hi;
    out.rhs_mean = rs.mean;
    out.rhs_lo = rci.lo;
    out.rhs_hi = rci.hi;
    out.overlap = lci.overlaps(rci);
    return out;
}

// ---------------------------------------------------------------------------
// Explicit graphs
// ---------------------------------------------------------------------------

void ForestGraph::add_edge(GraphNode a, GraphNode b) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
}

std::int64_t ForestGraph::distance(GraphNode a, GraphNode b) const {
    if (a == b) return 0;
    std::map<GraphNode, std::int64_t> dist;
    std::deque<GraphNode> queue;
    dist[a] = 0;
    queue.push_back(a);
    while (!queue.empty()) {
        const GraphNode v = queue.front();
        queue.pop_front();
        auto it = adjacency.find(v);
        if (it == adjacency.end()) continue;
        for (const GraphNode& w : it->second) {
            if (dist.count(w)) continue;
            dist[w] = dist[v] + 1;
            if (w == b) return dist[w];
            queue.push_back(w);
        }
    }
    return -1;
}

ForestGraph primal_graph(const StripForest& strip) {
    ForestGraph g;
    g.root = {1, 0};
    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const std::int64_t p = row.s[k + 1] - 1;
            for (std::int64_t c = row.t[k]; c < row.t[k + 1]; ++c)
                g.add_edge({2 * p + 1, j}, {2 * c + 1, j + 1});
        }
    }
    return g;
}

ForestGraph dual_graph(const StripForest& strip) {
    ForestGraph g;
    g.root = {0, strip.r};
    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const std::int64_t parent = row.t[k];
            for (std::int64_t c = row.s[k]; c < row.s[k + 1]; ++c)
                g.add_edge({2 * parent, j + 1}, {2 * c, j});
        }
    }
    return g;
}

ForestGraph reroot_dual(const StripForest& strip, const DualSurvey& survey) {
    // (x, j) -> (x + 1/2, r - j): doubled, (2x, j) -> (2x + 1, r - j).
    ForestGraph g;
    g.root = {2 * survey.j_r + 1, 0};
    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const std::int64_t parent = row.t[k];
            for (std::int64_t c = row.s[k]; c < row.s[k + 1]; ++c)
                g.add_edge({2 * parent + 1, strip.r - (j + 1)},
                           {2 * c + 1, strip.r - j});
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Meshing
// ---------------------------------------------------------------------------

std::size_t MeshForest::node_count() const {
    std::size_t n = 0;
    for (const auto& lv : spanned)
        for (auto v : lv) n += v;
    return n;
}

MeshForest mesh_subforest(const StripForest& strip, std::int64_t mesh_step) {
    if (mesh_step < 1)
        throw std::invalid_argument("mesh_subforest: mesh_step must be >= 1");
    MeshForest mesh;
    mesh.mesh_step = mesh_step;
    mesh.w_lo = strip.w_lo;
    mesh.w_hi = strip.w_hi;
    const std::size_t W = static_cast<std::size_t>(strip.width());
    mesh.spanned.assign(static_cast<std::size_t>(strip.r + 1),
                        std::vector<std::uint8_t>(W, 0));

    for (std::int64_t j = strip.r - strip.r % mesh_step; j >= 0; j -= mesh_step) {
        for (std::int64_t x = strip.w_lo; x < strip.w_hi; ++x) {
            if (floor_mod(x, mesh_step) != 0) continue;
            // walk the ancestor path down to the grafting line
            std::int64_t cx = x, cj = j;
            for (;;) {
                auto& flag = mesh.spanned[static_cast<std::size_t>(cj)]
                                         [static_cast<std::size_t>(cx - strip.w_lo)];
                if (flag) break;
                flag = 1;
                if (cj == 0) break;
                const auto& row = strip.rows[static_cast<std::size_t>(cj - 1)];
                const std::size_t k = brick_covering_top(row, cx);
                const std::int64_t p = row.s[k + 1] - 1;
                if (p < strip.w_lo || p >= strip.w_hi) break;  // truncated path
                cx = p;
                cj -= 1;
            }
        }
    }
    return mesh;
}

std::int64_t hausdorff_to_mesh(const StripForest& strip, const MeshForest& mesh,
                               std::int64_t radius) {
    const std::int64_t W = strip.width();
    const std::int64_t levels = strip.r + 1;
    const auto idx = [&](std::int64_t j, std::int64_t x) {
        return static_cast<std::size_t>(j * W + (x - strip.w_lo));
    };

    // neighbors in the grafted strip graph
    const auto for_each_neighbor = [&](std::int64_t j, std::int64_t x, auto&& fn,
                                       bool& contact) {
        if (j > 0) {  // parent below
            const auto& row = strip.rows[static_cast<std::size_t>(j - 1)];
            const std::size_t k = brick_covering_top(row, x);
            const std::int64_t p = row.s[k + 1] - 1;
            if (p < strip.w_lo || p >= strip.w_hi)
                contact = true;
            else
                fn(j - 1, p);
        }
        if (j < strip.r) {  // children above: tops of the brick ending at x+1
            const auto& row = strip.rows[static_cast<std::size_t>(j)];
            const std::size_t k = brick_covering_bottom(row, x);
            if (row.s[k + 1] == x + 1) {
                for (std::int64_t c = row.t[k]; c < row.t[k + 1]; ++c) {
                    if (c < strip.w_lo || c >= strip.w_hi)
                        contact = true;
                    else
                        fn(j + 1, c);
                }
            }
        }
        if (j == 0) {  // grafting line
            if (x - 1 < strip.w_lo)
                contact = true;
            else
                fn(std::int64_t{0}, x - 1);
            if (x + 1 >= strip.w_hi)
                contact = true;
            else
                fn(std::int64_t{0}, x + 1);
        }
    };

    // Ball around the root node (1/2, 0).
    std::vector<std::int64_t> dist_root(static_cast<std::size_t>(levels * W), -1);
    if (0 < strip.w_lo || 0 >= strip.w_hi)
        throw WindowTooSmall("hausdorff: root outside window");
    std::deque<std::pair<std::int64_t, std::int64_t>> queue;
    dist_root[idx(0, 0)] = 0;
    queue.push_back({0, 0});
    bool contact = false;
    std::vector<std::pair<std::int64_t, std::int64_t>> ball;
    while (!queue.empty()) {
        const auto [j, x] = queue.front();
        queue.pop_front();
        const std::int64_t d = dist_root[idx(j, x)];
        ball.push_back({j, x});
        if (d == radius) continue;
        for_each_neighbor(
            j, x,
            [&](std::int64_t nj, std::int64_t nx) {
                if (dist_root[idx(nj, nx)] < 0) {
                    dist_root[idx(nj, nx)] = d + 1;
                    queue.push_back({nj, nx});
                }
            },
            contact);
    }
    if (contact)
        throw WindowTooSmall("hausdorff: ball reached the window boundary");

    // Trees met by the ball must be fully resolved.
    const TreeLabels labels = propagate_primal_labels(strip);
    for (const auto& [j, x] : ball) {
        const std::int64_t lab = labels.at(j, x);
        if (lab == kTaintLabel || labels.is_escaped(lab))
            throw WindowTooSmall("hausdorff: ball tree escaped the window");
    }

    // Multi-source BFS from the grafted mesh subforest (spanned nodes plus
    // the whole grafting line).
    std::vector<std::int64_t> dist_mesh(static_cast<std::size_t>(levels * W), -1);
    queue.clear();
    for (std::int64_t x = strip.w_lo; x < strip.w_hi; ++x) {
        dist_mesh[idx(0, x)] = 0;
        queue.push_back({0, x});
    }
    for (std::int64_t j = 1; j <= strip.r; ++j)
        for (std::int64_t x = strip.w_lo; x < strip.w_hi; ++x)
            if (mesh.contains(j, x) && dist_mesh[idx(j, x)] < 0) {
                dist_mesh[idx(j, x)] = 0;
                queue.push_back({j, x});
            }
    bool ignored = false;
    while (!queue.empty()) {
        const auto [j, x] = queue.front();
        queue.pop_front();
        const std::int64_t d = dist_mesh[idx(j, x)];
        for_each_neighbor(
            j, x,
            [&](std::int64_t nj, std::int64_t nx) {
                if (dist_mesh[idx(nj, nx)] < 0) {
                    dist_mesh[idx(nj, nx)] = d + 1;
                    queue.push_back({nj, nx});
                }
            },
            ignored);
    }

    std::int64_t witness = 0;
    for (const auto& [j, x] : ball)
        witness = std::max(witness, dist_mesh[idx(j, x)]);
    return witness;
}

MeshWitness hausdorff_to_mesh_streaming(const StripForest& strip,
                                        std::int64_t mesh_step,
                                        std::int64_t radius) {
    if (mesh_step < 1)
        throw std::invalid_argument("hausdorff streaming: mesh_step must be >= 1");
    const std::int64_t W = strip.width();
    const std::size_t w = static_cast<std::size_t>(W);
    const std::int64_t r = strip.r;

    const auto is_mesh_level = [&](std::int64_t j) { return j % mesh_step == 0; };
    const auto is_mesh_abscissa = [&](std::int64_t x) {
        return floor_mod(x, mesh_step) == 0;
    };

    // Sweep A (top to bottom): down[j][x] = distance to the nearest marked
    // node in the subtree above (x, j); marked = mesh node, spanned ancestor
    // (distance 0 cascades down ancestor paths), or the grafting line.
    std::vector<std::vector<std::int64_t>> down(
        static_cast<std::size_t>(r + 1), std::vector<std::int64_t>(w, kInf));
    for (std::int64_t j = r; j >= 0; --j) {
        auto& cur = down[static_cast<std::size_t>(j)];
        if (j == 0) {
            std::fill(cur.begin(), cur.end(), 0);
        } else if (is_mesh_level(j)) {
            for (std::int64_t x = strip.w_lo; x < strip.w_hi; ++x)
                if (is_mesh_abscissa(x))
                    cur[static_cast<std::size_t>(x - strip.w_lo)] = 0;
        }
        if (j == r) continue;
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        const auto& above = down[static_cast<std::size_t>(j + 1)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const std::int64_t p = row.s[k + 1] - 1;
            if (p < strip.w_lo || p >= strip.w_hi) continue;
            std::int64_t best = kInf;
            const std::int64_t lo = std::max(row.t[k], strip.w_lo);
            const std::int64_t hi = std::min(row.t[k + 1], strip.w_hi);
            for (std::int64_t c = lo; c < hi; ++c)
                best = std::min(best, above[static_cast<std::size_t>(c - strip.w_lo)]);
            auto& slot = cur[static_cast<std::size_t>(p - strip.w_lo)];
            if (best != kInf) slot = std::min(slot, best + 1);
        }
    }

    // Sweep B (bottom to top): exact distance ans[c] = min(down[c],
    // ans[parent] + 1); tree labels ride along for the ball test.
    MeshWitness result;
    std::vector<std::int64_t> ans = down[0];  // level 0: all zero
    std::vector<std::int64_t> label(w);
    for (std::int64_t x = strip.w_lo; x < strip.w_hi; ++x) {
        label[static_cast<std::size_t>(x - strip.w_lo)] = x;
        if (std::llabs(x) <= radius)
            result.max_abscissa = std::max(result.max_abscissa, std::llabs(x));
    }

    std::vector<std::int64_t> next_ans(w), next_label(w);
    for (std::int64_t j = 0; j < r; ++j) {
        next_ans = down[static_cast<std::size_t>(j + 1)];
        std::fill(next_label.begin(), next_label.end(), kTaintLabel);
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const std::int64_t p = row.s[k + 1] - 1;
            if (p < strip.w_lo || p >= strip.w_hi) continue;
            const std::int64_t plabel = label[static_cast<std::size_t>(p - strip.w_lo)];
            const std::int64_t pans = ans[static_cast<std::size_t>(p - strip.w_lo)];
            const bool in_ball_tree =
                plabel != kTaintLabel && std::llabs(plabel) <= radius;
            if (in_ball_tree && (row.t[k] < strip.w_lo || row.t[k + 1] > strip.w_hi))
                throw WindowTooSmall("hausdorff streaming: ball tree escaped");
            const std::int64_t lo = std::max(row.t[k], strip.w_lo);
            const std::int64_t hi = std::min(row.t[k + 1], strip.w_hi);
            for (std::int64_t c = lo; c < hi; ++c) {
                const std::size_t ci = static_cast<std::size_t>(c - strip.w_lo);
                next_label[ci] = plabel;
                next_ans[ci] = std::min(next_ans[ci], pans + 1);
            }
        }
        ans.swap(next_ans);
        label.swap(next_label);
        for (std::int64_t x = strip.w_lo; x < strip.w_hi; ++x) {
            const std::size_t xi = static_cast<std::size_t>(x - strip.w_lo);
            const std::int64_t lab = label[xi];
            if (lab == kTaintLabel) continue;
            if (std::llabs(lab) + (j + 1) <= radius) {
                result.witness = std::max(result.witness, ans[xi]);
                result.max_abscissa = std::max(result.max_abscissa, std::llabs(x));
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

std::string strip_to_text(const StripForest& strip) {
    std::ostringstream os;
    os << "# strip r=" << strip.r << " window=[" << strip.w_lo << "," << strip.w_hi
       << ")\n";
    os << "# brick <level> <s> <b> <t> <h>\n";
    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k)
            os << "brick " << j << " " << row.s[k] << " " << row.s[k + 1] - row.s[k]
               << " " << row.t[k] << " " << row.t[k + 1] - row.t[k] << "\n";
    }
    os << "# edges in doubled abscissae: primal nodes odd, dual vertices even\n";
    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const std::int64_t p = row.s[k + 1] - 1;
            for (std::int64_t c = row.t[k]; c < row.t[k + 1]; ++c)
                os << "edge primal " << 2 * p + 1 << " " << j << " " << 2 * c + 1
                   << " " << j + 1 << "\n";
            for (std::int64_t c = row.s[k]; c < row.s[k + 1]; ++c)
                os << "edge dual " << 2 * row.t[k] << " " << j + 1 << " " << 2 * c
                   << " " << j << "\n";
        }
    }
    return os.str();
}

std::string strip_to_svg(const StripForest& strip) {
    const double ux = 40.0, uy = 40.0, margin = 20.0;
    const double width = ux * static_cast<double>(strip.width()) + 2 * margin;
    const double height = uy * static_cast<double>(strip.r) + 2 * margin;
    const auto X = [&](double x) { return margin + (x - static_cast<double>(strip.w_lo)) * ux; };
    const auto Y = [&](double j) { return height - margin - j * uy; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\">\n";
    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            // brick outline: bottom and top segments plus slanted sides
            os << "<polygon points=\"" << X(row.s[k]) << "," << Y(j) << " "
               << X(row.s[k + 1]) << "," << Y(j) << " " << X(row.t[k + 1]) << ","
               << Y(j + 1) << " " << X(row.t[k]) << "," << Y(j + 1)
               << "\" fill=\"#f3f0e8\" stroke=\"#444\" stroke-width=\"1\"/>\n";
        }
    }
    for (std::int64_t j = 0; j < strip.r; ++j) {
        const auto& row = strip.rows[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k + 1 < row.s.size(); ++k) {
            const double p = static_cast<double>(row.s[k + 1]) - 0.5;
            for (std::int64_t c = row.t[k]; c < row.t[k + 1]; ++c)
                os << "<line x1=\"" << X(p) << "\" y1=\"" << Y(j) << "\" x2=\""
                   << X(static_cast<double>(c) + 0.5) << "\" y2=\"" << Y(j + 1)
                   << "\" stroke=\"#1f5fbf\" stroke-width=\"1.5\"/>\n";
            const double dp = static_cast<double>(row.t[k]);
            for (std::int64_t c = row.s[k]; c < row.s[k + 1]; ++c)
                os << "<line x1=\"" << X(dp) << "\" y1=\"" << Y(j + 1)
                   << "\" x2=\"" << X(static_cast<double>(c)) << "\" y2=\"" << Y(j)
                   << "\" stroke=\"#e08a1e\" stroke-width=\"1.2\" stroke-dasharray=\"3,2\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace brickwall
