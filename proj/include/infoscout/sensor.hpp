#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "infoscout/geometry.hpp"
#include "infoscout/world.hpp"

namespace infoscout {

struct BeliefMap;

struct SensorConfig {
    double fov = 3.0;                 // full field of view, radians
    double angular_resolution = 0.05; // radians between beams
    double max_range = 6.0;           // meters
    double range_noise_sigma = 0.03;  // meters, additive Gaussian on returns
    double cell_step = 0.6;           // meters, range-integration step for info evaluation

    // floor(fov / angular_resolution) + 1 beams spanning [-fov/2, +fov/2].
    int beam_count() const;
    void validate() const;  // throws std::invalid_argument on bad fields
};

// One ray of a scan. cell_chain lists every map cell whose interior the ray
// crosses, ordered outward from the sensor; cell_ranges holds the distance to
// the midpoint of the ray's segment through each cell. Chains are truncated
// at the hit cell (inclusive) when the beam returns.
struct Beam {
    double angle = 0.0;            // absolute world angle
    double measured_range = 0.0;   // meters, valid when !max_range_return
    bool max_range_return = false; // no return within max_range
    std::vector<std::int32_t> cell_chain;
    std::vector<double> cell_ranges;
};

struct Scan {
    Pose pose;
    std::vector<Beam> beams;
};

// Grid traversal for one ray. Returns every cell whose interior the segment
// from (ox, oy) of the given length crosses, starting with the origin cell.
// entry[i]/mid[i] are distances to the cell boundary crossing and to the
// midpoint of the traversed segment. Rays that cross a cell corner exactly
// step diagonally (neither corner-adjacent cell has its interior touched).
struct RayChain {
    std::vector<std::int32_t> cells;
    std::vector<double> entry;
    std::vector<double> mid;
};
void raycast(const GridGeometry& geom, double ox, double oy, double angle, double max_range,
             RayChain& out);

// Simulates a scan against ground truth. Beams return at the boundary of the
// first Occupied chain cell with additive Gaussian range noise (clamped to
// (0, max_range]); beams that cross no Occupied cell are max-range returns.
// Throws std::invalid_argument when the pose is not free in the truth map.
Scan simulate_scan(const GroundTruthMap& truth, const Pose& pose, const SensorConfig& cfg,
                   std::mt19937& rng);

// Deterministic scan against the current belief: beams stop at the first cell
// whose expected occupancy exceeds occupied_threshold. Used for information
// evaluation; no noise is applied.
Scan virtual_scan(const BeliefMap& belief, const Pose& pose, const SensorConfig& cfg,
                  double occupied_threshold);

}  // namespace infoscout
