#include "infoscout/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "infoscout/crm.hpp"

namespace infoscout {

int SensorConfig::beam_count() const {
    return static_cast<int>(std::floor(fov / angular_resolution)) + 1;
}

void SensorConfig::validate() const {
    if (!(fov > 0.0) || fov > 2.0 * M_PI)
        throw std::invalid_argument("sensor fov must be in (0, 2*pi]");
    if (!(angular_resolution > 0.0))
        throw std::invalid_argument("sensor angular_resolution must be positive");
    if (!(max_range > 0.0)) throw std::invalid_argument("sensor max_range must be positive");
    if (range_noise_sigma < 0.0)
        throw std::invalid_argument("sensor range_noise_sigma must be non-negative");
    if (!(cell_step > 0.0)) throw std::invalid_argument("sensor cell_step must be positive");
}

void raycast(const GridGeometry& geom, double ox, double oy, double angle, double max_range,
             RayChain& out) {
    out.cells.clear();
    out.entry.clear();
    out.mid.clear();
    int cx = geom.cell_x(ox);
    int cy = geom.cell_y(oy);
    if (!geom.in_bounds(cx, cy)) throw std::invalid_argument("ray origin outside map");

    const double res = geom.resolution;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    const double inf = std::numeric_limits<double>::infinity();

    int sx = 0, sy = 0;
    double tmax_x = inf, tdelta_x = inf;
    double tmax_y = inf, tdelta_y = inf;
    if (std::abs(dx) > 1e-15) {
        sx = dx > 0.0 ? 1 : -1;
        double bx = geom.origin_x + (cx + (sx > 0 ? 1 : 0)) * res;
        tmax_x = (bx - ox) / dx;
        tdelta_x = res / std::abs(dx);
    }
    if (std::abs(dy) > 1e-15) {
        sy = dy > 0.0 ? 1 : -1;
        double by = geom.origin_y + (cy + (sy > 0 ? 1 : 0)) * res;
        tmax_y = (by - oy) / dy;
        tdelta_y = res / std::abs(dy);
    }

    double t = 0.0;
    for (;;) {
        double texit = std::min(std::min(tmax_x, tmax_y), max_range);
        if (out.cells.empty() || texit - t > 1e-12) {
            out.cells.push_back(static_cast<std::int32_t>(geom.index(cx, cy)));
            out.entry.push_back(t);
            out.mid.push_back(0.5 * (t + texit));
        }
        if (tmax_x >= max_range && tmax_y >= max_range) break;
        if (tmax_x == tmax_y) {  // exact corner crossing: step diagonally
            t = tmax_x;
            cx += sx;
            cy += sy;
            tmax_x += tdelta_x;
            tmax_y += tdelta_y;
        } else if (tmax_x < tmax_y) {
            t = tmax_x;
            cx += sx;
            tmax_x += tdelta_x;
        } else {
            t = tmax_y;
            cy += sy;
            tmax_y += tdelta_y;
        }
        if (t >= max_range || !geom.in_bounds(cx, cy)) break;
    }
}

namespace {

template <typename BlockedFn>
Scan scan_impl(const GridGeometry& geom, const Pose& pose, const SensorConfig& cfg,
               BlockedFn blocked, std::mt19937* noise_rng, double noise_sigma) {
    cfg.validate();
    Scan scan;
    scan.pose = pose;
    int n = cfg.beam_count();
    scan.beams.resize(n);
    RayChain chain;
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (int i = 0; i < n; ++i) {
        Beam& beam = scan.beams[i];
        beam.angle = wrap_angle(pose.heading - 0.5 * cfg.fov + i * cfg.angular_resolution);
        raycast(geom, pose.x, pose.y, beam.angle, cfg.max_range, chain);
        std::size_t hit = chain.cells.size();
        for (std::size_t k = 0; k < chain.cells.size(); ++k) {
            if (blocked(chain.cells[k])) {
                hit = k;
                break;
            }
        }
        if (hit < chain.cells.size()) {
            beam.max_range_return = false;
            double z = chain.entry[hit];
            if (noise_rng != nullptr && noise_sigma > 0.0) z += noise(*noise_rng);
            beam.measured_range = std::clamp(z, 1e-6, cfg.max_range);
            beam.cell_chain.assign(chain.cells.begin(), chain.cells.begin() + hit + 1);
            beam.cell_ranges.assign(chain.mid.begin(), chain.mid.begin() + hit + 1);
        } else {
            beam.max_range_return = true;
            beam.measured_range = cfg.max_range;
            beam.cell_chain = chain.cells;
            beam.cell_ranges = chain.mid;
        }
    }
    return scan;
}

}  // namespace

Scan simulate_scan(const GroundTruthMap& truth, const Pose& pose, const SensorConfig& cfg,
                   std::mt19937& rng) {
    if (!is_free(truth, pose)) throw std::invalid_argument("scan pose not free in ground truth");
    return scan_impl(
        truth.geom, pose, cfg,
        [&](std::int32_t idx) { return truth.cells[idx] == Cell::Occupied; }, &rng,
        cfg.range_noise_sigma);
}

Scan virtual_scan(const BeliefMap& belief, const Pose& pose, const SensorConfig& cfg,
                  double occupied_threshold) {
    if (!belief.geom.contains(pose.x, pose.y))
        throw std::invalid_argument("virtual scan pose outside map");
    return scan_impl(
        belief.geom, pose, cfg,
        [&](std::int32_t idx) { return belief.expected(idx) > occupied_threshold; }, nullptr, 0.0);
}

}  // namespace infoscout
