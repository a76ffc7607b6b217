#include "infoscout/explore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace infoscout {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ExplorationResult run_exploration(const GroundTruthMap& truth, const ExplorationConfig& cfg,
                                  const SensorConfig& sensor, const CrmConfig& crm,
                                  const InfoEvalConfig& info, const KernelConfig& kernel,
                                  const BKIConfig& bki, const OptimizeConfig& opt,
                                  const PlanConfig& plan, const BeliefMap* initial_belief) {
    if (cfg.n_loop < 1) throw std::invalid_argument("run_exploration: n_loop must be positive");
    const Pose start{cfg.start_x, cfg.start_y, cfg.start_heading};
    if (!is_free(truth, start))
        throw std::invalid_argument("run_exploration: start pose not free in the truth map");

    ExplorationResult out{initial_belief ? *initial_belief
                                         : BeliefMap::uniform(truth.geom, info.lambda_m),
                          {}};
    BeliefMap& belief = out.belief;
    if (belief.geom.width_cells != truth.geom.width_cells || belief.geom.height_cells != truth.geom.height_cells)
        throw std::invalid_argument("run_exploration: belief grid does not match the truth map");

    std::mt19937 rng(cfg.seed);
    Pose pose = start;
    {
        Scan s = simulate_scan(truth, pose, sensor, rng);
        update_with_scan(belief, s, sensor, crm);
    }

    // Stack of visited decision poses; the top always equals the current pose.
    std::vector<Pose> history{pose};
    double distance_total = 0.0;

    auto evaluate = [&](const Pose& p) { return evaluate_crmi(belief, p, sensor, info, crm); };
    const SurrogateBackend backend =
        (cfg.engine == Engine::bkio) ? SurrogateBackend::bki : SurrogateBackend::gp;

    for (int iter = 1; iter <= cfg.n_loop && !history.empty(); ++iter) {
        const auto t_step = std::chrono::steady_clock::now();
        StepRecord rec;
        rec.step = iter;

        ActionCandidates cand = gen_actions(pose, belief, cfg.n_points, cfg.n_headings,
                                            cfg.action_radius, plan, rng);

        double best_val = -std::numeric_limits<double>::infinity();
        Pose best_pose = pose;
        double eval_time = 0.0;
        long long step_explicit = 0;
        bool evaluated = false;
        std::vector<Pose> known_actions;  // every explicitly scored action this step
        std::vector<double> known_values;

        if (!cand.poses.empty()) {
            const std::size_t n_exp = std::min<std::size_t>(
                static_cast<std::size_t>(std::max(cfg.n_explicit, 1)), cand.poses.size());
            if (cfg.engine == Engine::ng || n_exp == cand.poses.size()) {
                const auto t0 = std::chrono::steady_clock::now();
                OptimizationResult r = naive_greedy(cand.poses, evaluate, opt.random_ties, &rng);
                eval_time = seconds_since(t0);
                best_pose = r.best_actions.front();
                best_val = r.best_values.front();
                step_explicit = static_cast<long long>(r.explicit_evals);
                known_actions = std::move(r.all_actions);
                known_values = std::move(r.all_values);
            } else {
                ActionSet split = split_actions(cand.poses, n_exp, rng);
                SampleSet init;
                init.actions = split.explicit_actions;
                init.values.reserve(init.actions.size());
                for (const Pose& a : init.actions) init.values.push_back(evaluate(a));
                const auto t0 = std::chrono::steady_clock::now();
                OptimizationResult r =
                    bo_loop(init, split.query_actions, backend, evaluate, kernel, bki, opt, &rng);
                eval_time = seconds_since(t0);
                std::size_t bi = 0;
                for (std::size_t i = 1; i < r.best_values.size(); ++i)
                    if (r.best_values[i] > r.best_values[bi]) bi = i;
                best_pose = r.best_actions[bi];
                best_val = r.best_values[bi];
                step_explicit =
                    static_cast<long long>(init.actions.size()) + static_cast<long long>(r.explicit_evals);
                known_actions = std::move(r.all_actions);
                known_values = std::move(r.all_values);
            }
            evaluated = true;
        }

        Pose target = pose;
        bool have_target = false;
        std::optional<LocalPath> path;
        if (evaluated && best_val > cfg.info_threshold) {
            target = best_pose;
            path = astar(belief, pose, target, plan);
            have_target = path.has_value();
            if (!have_target) {
                // next-best informative target that the planner can actually
                // reach; unreachable ones usually sit deep in unknown space
                std::vector<std::size_t> order(known_values.size());
                for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return known_values[a] > known_values[b];
                });
                for (std::size_t i : order) {
                    if (known_values[i] <= cfg.info_threshold) break;
                    const Pose& p = known_actions[i];
                    if (p.x == best_pose.x && p.y == best_pose.y && p.heading == best_pose.heading)
                        continue;
                    path = astar(belief, pose, p, plan);
                    if (path) {
                        target = p;
                        best_val = known_values[i];
                        have_target = true;
                        break;
                    }
                }
            }
        }
        if (!have_target) {
            rec.backtracked = true;
            if (!history.empty()) history.pop_back();
            while (!history.empty()) {
                target = history.back();
                path = astar(belief, pose, target, plan);
                if (path) {
                    have_target = true;
                    break;
                }
                history.pop_back();
            }
        }

        if (have_target) {
            double traveled = 0.0;
            Pose cur = pose;
            Pose last_scan = pose;
            const auto& wps = path->waypoints;
            for (std::size_t w = 0; w < wps.size(); ++w) {
                const Pose& wp = wps[w];
                if (!is_free(truth, wp)) break;  // the world disagrees, stop short
                traveled += std::hypot(wp.x - cur.x, wp.y - cur.y);
                cur = wp;
                const bool final_wp = (w + 1 == wps.size());
                const double since = std::hypot(cur.x - last_scan.x, cur.y - last_scan.y);
                if (since >= truth.geom.resolution - 1e-12 || (final_wp && since > 1e-6)) {
                    Scan s = simulate_scan(truth, cur, sensor, rng);
                    update_with_scan(belief, s, sensor, crm);
                    last_scan = cur;
                }
            }
            pose = cur;
            distance_total += traveled;

            if (!rec.backtracked) {
                history.push_back(pose);
            } else if (history.empty() ||
                       std::hypot(pose.x - history.back().x, pose.y - history.back().y) > 1e-9) {
                history.push_back(pose);  // stopped short of the backtrack target
            } else {
                history.back() = pose;
            }
        }

        rec.chosen = have_target ? target : pose;
        rec.crmi_bits = evaluated ? best_val : 0.0;
        rec.eval_time_s = eval_time;
        rec.explicit_evals = step_explicit;
        rec.entropy_bits = map_entropy(belief);
        rec.coverage = coverage(belief, cfg.coverage_epsilon);
        rec.distance_m = distance_total;
        rec.step_time_s = seconds_since(t_step);
        out.records.push_back(rec);

        if (!have_target) break;  // history exhausted, exploration is complete
    }
    return out;
}

}  // namespace infoscout
