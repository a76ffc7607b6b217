#pragma once

#include <optional>
#include <random>
#include <vector>

#include "infoscout/crm.hpp"
#include "infoscout/geometry.hpp"

namespace infoscout {

struct PlanConfig {
    double free_threshold = 0.35;      // expected occupancy below this is traversable
    double occupied_threshold = 0.65;  // at or above this blocks planning and sampling
    double unknown_tail_frac = 0.25;   // unknown cells allowed this close to the goal
    int reject_budget_per_point = 200;
};

// Candidate actions around the robot plus a flag for an exhausted rejection
// budget (the caller may then backtrack).
struct ActionCandidates {
    std::vector<Pose> poses;
    bool shortfall = false;
};

struct ActionSet {
    std::vector<Pose> explicit_actions;  // x, explicitly evaluated
    std::vector<Pose> query_actions;     // x*, surrogate queries
};

struct LocalPath {
    std::vector<Pose> waypoints;  // start cell to goal pose, headings face forward
    double length = 0.0;          // meters of grid cost
};

// Samples n_points collision-free positions uniformly from the disk of the
// given radius around current (each must pass a straight-line collision test
// from current on the belief), then expands each into n_headings evenly
// spaced absolute headings.
ActionCandidates gen_actions(const Pose& current, const BeliefMap& belief, int n_points,
                             int n_headings, double radius, const PlanConfig& cfg,
                             std::mt19937& rng);

// Uniformly random n_explicit-subset as the explicit set, remainder queries.
ActionSet split_actions(const std::vector<Pose>& candidates, std::size_t n_explicit,
                        std::mt19937& rng);

// 8-connected A* over the belief grid with octile heuristic and no corner
// cutting. Cells below free_threshold are traversable anywhere; unknown
// cells (below occupied_threshold) only within unknown_tail_frac of the
// start-goal distance from the goal. Returns nullopt when no path exists.
std::optional<LocalPath> astar(const BeliefMap& belief, const Pose& start, const Pose& goal,
                               const PlanConfig& cfg);

}  // namespace infoscout
