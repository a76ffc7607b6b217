#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace infoscout {

// Robot/action pose in world coordinates. heading is stored wrapped to (-pi, pi].
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
};

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    double t = std::fmod(a + M_PI, 2.0 * M_PI);
    if (t <= 0.0) t += 2.0 * M_PI;
    return t - M_PI;
}

// Discretization shared by ground-truth maps and belief maps.
// Cell (0,0) spans [origin, origin + resolution) on both axes; cells are stored
// row-major (index = cy * width_cells + cx).
struct GridGeometry {
    int width_cells = 0;
    int height_cells = 0;
    double resolution = 0.0;
    double origin_x = 0.0;
    double origin_y = 0.0;

    std::size_t cell_count() const { return static_cast<std::size_t>(width_cells) * height_cells; }

    bool in_bounds(int cx, int cy) const {
        return cx >= 0 && cy >= 0 && cx < width_cells && cy < height_cells;
    }

    std::size_t index(int cx, int cy) const {
        return static_cast<std::size_t>(cy) * width_cells + cx;
    }

    int cell_x(double wx) const { return static_cast<int>(std::floor((wx - origin_x) / resolution)); }
    int cell_y(double wy) const { return static_cast<int>(std::floor((wy - origin_y) / resolution)); }

    bool contains(double wx, double wy) const {
        return in_bounds(cell_x(wx), cell_y(wy));
    }

    double center_x(int cx) const { return origin_x + (cx + 0.5) * resolution; }
    double center_y(int cy) const { return origin_y + (cy + 0.5) * resolution; }

    double width_m() const { return width_cells * resolution; }
    double height_m() const { return height_cells * resolution; }
};

}  // namespace infoscout
