#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infoscout/geometry.hpp"

namespace infoscout {

enum class Cell : std::uint8_t { Free = 0, Occupied = 1 };

// Binary occupancy grid used as simulation ground truth.
struct GroundTruthMap {
    GridGeometry geom;
    std::vector<Cell> cells;  // row-major, size = width_cells * height_cells

    Cell at(int cx, int cy) const { return cells[geom.index(cx, cy)]; }
    Cell& at(int cx, int cy) { return cells[geom.index(cx, cy)]; }
};

// Maze-style map built from axis-aligned wall segments with door gaps.
// Deterministic in (dimensions, resolution, seed). The canonical start area
// around (1.2, 1.2) m is kept free, the border ring is Occupied, and the free
// space is 4-connected.
GroundTruthMap generate_structured(double width_m, double height_m, double resolution,
                                   std::uint32_t seed);

// Scatter of random ellipse obstacles with the same border/connectivity
// guarantees as generate_structured.
GroundTruthMap generate_unstructured(double width_m, double height_m, double resolution,
                                     int n_obstacles, std::uint32_t seed);

// Plain-text grayscale map file:
//   line 1: "ISMAP1"
//   line 2: "<width_cells> <height_cells>"
//   line 3: "<resolution_m>"
//   then height_cells rows of width_cells integers in [0, 255], row 0 first.
// Values >= 128 load as Free, below as Occupied. Parse failures throw
// std::runtime_error naming the offending line.
GroundTruthMap load_map(const std::string& path);
void save_map(const GroundTruthMap& map, const std::string& path);

// True when the pose lies inside the map and its cell is Free.
bool is_free(const GroundTruthMap& map, const Pose& pose);

// Number of 4-connected free components (1 on every generated map).
int count_free_components(const GroundTruthMap& map);

}  // namespace infoscout
