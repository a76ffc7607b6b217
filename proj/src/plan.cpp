#include "infoscout/plan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "infoscout/sensor.hpp"

namespace infoscout {

namespace {

// Straight segment from (ox, oy) to (px, py) crosses no cell the belief
// already considers occupied.
bool line_is_free(const BeliefMap& belief, double ox, double oy, double px, double py,
                  double occupied_threshold, RayChain& scratch) {
    const double dx = px - ox;
    const double dy = py - oy;
    const double dist = std::hypot(dx, dy);
    if (dist < 1e-12) return true;
    raycast(belief.geom, ox, oy, std::atan2(dy, dx), dist, scratch);
    for (std::int32_t c : scratch.cells) {
        if (belief.expected(static_cast<std::size_t>(c)) >= occupied_threshold) return false;
    }
    return true;
}

}  // namespace

ActionCandidates gen_actions(const Pose& current, const BeliefMap& belief, int n_points,
                             int n_headings, double radius, const PlanConfig& cfg,
                             std::mt19937& rng) {
    if (n_points < 1) throw std::invalid_argument("gen_actions: n_points must be positive");
    if (n_headings < 1) throw std::invalid_argument("gen_actions: n_headings must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("gen_actions: radius must be positive");
    if (!belief.geom.contains(current.x, current.y))
        throw std::invalid_argument("gen_actions: current pose outside the map");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    ActionCandidates out;
    out.poses.reserve(static_cast<std::size_t>(n_points) * static_cast<std::size_t>(n_headings));
    RayChain scratch;
    std::vector<double> xs;
    std::vector<double> ys;
    for (int p = 0; p < n_points; ++p) {
        bool found = false;
        for (int attempt = 0; attempt < cfg.reject_budget_per_point; ++attempt) {
            // sqrt keeps the draw uniform over the disk area
            const double r = radius * std::sqrt(unit(rng));
            const double th = angle(rng);
            const double x = current.x + r * std::cos(th);
            const double y = current.y + r * std::sin(th);
            if (!belief.geom.contains(x, y)) continue;
            const std::size_t idx = belief.geom.index(belief.geom.cell_x(x), belief.geom.cell_y(y));
            if (belief.expected(idx) >= cfg.occupied_threshold) continue;
            if (!line_is_free(belief, current.x, current.y, x, y, cfg.occupied_threshold, scratch))
                continue;
            xs.push_back(x);
            ys.push_back(y);
            found = true;
            break;
        }
        if (!found) out.shortfall = true;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (int k = 0; k < n_headings; ++k) {
            const double h = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n_headings);
            out.poses.push_back(Pose{xs[i], ys[i], wrap_angle(h)});
        }
    }
    return out;
}

ActionSet split_actions(const std::vector<Pose>& candidates, std::size_t n_explicit,
                        std::mt19937& rng) {
    if (n_explicit > candidates.size())
        throw std::invalid_argument("split_actions: n_explicit exceeds candidate count");
    std::vector<std::size_t> idx(candidates.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    // partial Fisher-Yates; only the first n_explicit slots need to be random
    for (std::size_t i = 0; i < n_explicit && i + 1 < idx.size(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    ActionSet out;
    out.explicit_actions.reserve(n_explicit);
    out.query_actions.reserve(candidates.size() - n_explicit);
    for (std::size_t i = 0; i < n_explicit; ++i) out.explicit_actions.push_back(candidates[idx[i]]);
    for (std::size_t i = n_explicit; i < idx.size(); ++i)
        out.query_actions.push_back(candidates[idx[i]]);
    return out;
}

namespace {

struct OpenNode {
    double f = 0.0;
    std::uint64_t order = 0;  // push counter, breaks f ties deterministically
    std::int32_t cell = 0;
};

struct OpenNodeGreater {
    bool operator()(const OpenNode& a, const OpenNode& b) const {
        if (a.f != b.f) return a.f > b.f;
        return a.order > b.order;
    }
};

}  // namespace

std::optional<LocalPath> astar(const BeliefMap& belief, const Pose& start, const Pose& goal,
                               const PlanConfig& cfg) {
    const GridGeometry& geom = belief.geom;
    if (!geom.contains(start.x, start.y) || !geom.contains(goal.x, goal.y))
        throw std::invalid_argument("astar: endpoint outside the map");

    const int sx = geom.cell_x(start.x);
    const int sy = geom.cell_y(start.y);
    const int gx = geom.cell_x(goal.x);
    const int gy = geom.cell_y(goal.y);
    const std::size_t start_idx = geom.index(sx, sy);
    const std::size_t goal_idx = geom.index(gx, gy);

    if (belief.expected(goal_idx) >= cfg.occupied_threshold) return std::nullopt;

    const double res = geom.resolution;
    const double gcx = geom.center_x(gx);
    const double gcy = geom.center_y(gy);
    const double tail = cfg.unknown_tail_frac *
                        std::hypot(gcx - geom.center_x(sx), gcy - geom.center_y(sy));

    // Free cells pass anywhere; unknown ones only near the goal where the
    // planner is expected to push into unexplored space.
    auto passable = [&](int cx, int cy) {
        const std::size_t idx = geom.index(cx, cy);
        const double m = belief.expected(idx);
        if (m < cfg.free_threshold) return true;
        if (m >= cfg.occupied_threshold) return false;
        return std::hypot(geom.center_x(cx) - gcx, geom.center_y(cy) - gcy) <= tail + 1e-12;
    };

    const std::size_t n_cells = static_cast<std::size_t>(geom.width_cells) *
                                static_cast<std::size_t>(geom.height_cells);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g(n_cells, inf);
    std::vector<std::int32_t> parent(n_cells, -1);
    std::priority_queue<OpenNode, std::vector<OpenNode>, OpenNodeGreater> open;

    const double sqrt2 = std::numbers::sqrt2;
    auto heuristic = [&](int cx, int cy) {
        const double ax = std::abs(static_cast<double>(cx - gx));
        const double ay = std::abs(static_cast<double>(cy - gy));
        return res * (std::max(ax, ay) + (sqrt2 - 1.0) * std::min(ax, ay));
    };

    std::uint64_t pushes = 0;
    g[start_idx] = 0.0;
    open.push(OpenNode{heuristic(sx, sy), pushes++, static_cast<std::int32_t>(start_idx)});

    static const int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    while (!open.empty()) {
        const OpenNode node = open.top();
        open.pop();
        const std::size_t idx = static_cast<std::size_t>(node.cell);
        const int cx = static_cast<int>(idx) % geom.width_cells;
        const int cy = static_cast<int>(idx) / geom.width_cells;
        const double fg = g[idx];
        if (node.f > fg + heuristic(cx, cy) + 1e-12) continue;  // stale entry
        if (idx == goal_idx) break;
        for (int d = 0; d < 8; ++d) {
            const int nx = cx + dxs[d];
            const int ny = cy + dys[d];
            if (!geom.in_bounds(nx, ny)) continue;
            if (!passable(nx, ny)) continue;
            const bool diagonal = d >= 4;
            if (diagonal) {
                // no corner cutting: both orthogonal neighbours must pass
                if (!passable(cx + dxs[d], cy) || !passable(cx, cy + dys[d])) continue;
            }
            const double step = diagonal ? sqrt2 * res : res;
            const double ng = fg + step;
            const std::size_t nidx = geom.index(nx, ny);
            if (ng + 1e-15 < g[nidx]) {
                g[nidx] = ng;
                parent[nidx] = static_cast<std::int32_t>(idx);
                open.push(OpenNode{ng + heuristic(nx, ny), pushes++,
                                   static_cast<std::int32_t>(nidx)});
            }
        }
    }

    if (!std::isfinite(g[goal_idx])) return std::nullopt;

    std::vector<std::size_t> cells;
    for (std::int32_t c = static_cast<std::int32_t>(goal_idx); c >= 0;
         c = parent[static_cast<std::size_t>(c)]) {
        cells.push_back(static_cast<std::size_t>(c));
        if (static_cast<std::size_t>(c) == start_idx) break;
    }
    std::reverse(cells.begin(), cells.end());

    LocalPath path;
    path.length = g[goal_idx];
    path.waypoints.reserve(cells.size());
    if (cells.size() == 1) {
        path.waypoints.push_back(goal);
        return path;
    }
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const int cx = static_cast<int>(cells[i]) % geom.width_cells;
        const int cy = static_cast<int>(cells[i]) / geom.width_cells;
        const int nx2 = static_cast<int>(cells[i + 1]) % geom.width_cells;
        const int ny2 = static_cast<int>(cells[i + 1]) / geom.width_cells;
        const double wx = geom.center_x(cx);
        const double wy = geom.center_y(cy);
        const double hx = (i + 2 == cells.size()) ? goal.x : geom.center_x(nx2);
        const double hy = (i + 2 == cells.size()) ? goal.y : geom.center_y(ny2);
        path.waypoints.push_back(Pose{wx, wy, std::atan2(hy - wy, hx - wx)});
    }
    path.waypoints.push_back(goal);
    return path;
}

}  // namespace infoscout
