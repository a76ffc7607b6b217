#pragma once

#include <vector>

#include "infoscout/crm.hpp"
#include "infoscout/geometry.hpp"
#include "infoscout/infogain.hpp"
#include "infoscout/optimize.hpp"
#include "infoscout/plan.hpp"
#include "infoscout/sensor.hpp"
#include "infoscout/surrogate.hpp"
#include "infoscout/world.hpp"

namespace infoscout {

enum class Engine { ng, gpbo, bkio };

struct ExplorationConfig {
    double info_threshold = 2.0;  // bits; below this the robot backtracks
    int n_loop = 100;             // decision-step budget
    int n_points = 30;            // sampled positions per step
    int n_headings = 8;           // headings per position
    int n_explicit = 80;          // explicitly evaluated subset for the BO engines
    double action_radius = 6.0;   // meters
    double coverage_epsilon = 0.05;
    double start_x = 1.2;
    double start_y = 1.2;
    double start_heading = 0.0;
    Engine engine = Engine::ng;
    unsigned seed = 1;
};

// One decision step of a run. eval_time_s covers only the action-selection
// stage (the exhaustive sweep, or the optimizer loop including any explicit
// evaluations it requests); step_time_s covers the whole step including
// candidate generation, planning, motion, and map updates.
struct StepRecord {
    int step = 0;  // 1-based
    Pose chosen;   // selected action (or the backtrack target)
    double crmi_bits = 0.0;
    double eval_time_s = 0.0;
    double step_time_s = 0.0;
    double entropy_bits = 0.0;
    double coverage = 0.0;
    double distance_m = 0.0;  // cumulative
    bool backtracked = false;
    long long explicit_evals = 0;
};

struct ExplorationResult {
    BeliefMap belief;
    std::vector<StepRecord> records;
};

// Runs one exploration trial on the ground-truth map: scan, evaluate
// candidate actions with the configured engine, move (backtracking along the
// pose history when nothing informative remains), update the belief, repeat.
// Stops after n_loop steps or when the history stack empties. Throws
// std::invalid_argument when the start pose is not free in the truth map.
// initial_belief, when given, seeds the belief instead of a uniform map.
ExplorationResult run_exploration(const GroundTruthMap& truth, const ExplorationConfig& cfg,
                                  const SensorConfig& sensor, const CrmConfig& crm,
                                  const InfoEvalConfig& info, const KernelConfig& kernel,
                                  const BKIConfig& bki, const OptimizeConfig& opt,
                                  const PlanConfig& plan,
                                  const BeliefMap* initial_belief = nullptr);

}  // namespace infoscout
