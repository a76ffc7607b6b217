#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "infoscout/geometry.hpp"
#include "infoscout/surrogate.hpp"

namespace infoscout {

struct UCBConfig {
    enum class Schedule { constant, lemma1 };
    double alpha = 1.0;  // used by the constant schedule
    Schedule schedule = Schedule::constant;
    double delta = 0.1;  // lemma1 confidence level
};

struct OptimizeConfig {
    UCBConfig ucb;
    int n_epoch = 30;
    bool incumbent_compare = true;  // argmax over {f^I on x*} vs {y in D}
    bool cache_kernel = true;       // reuse kernel rows across epochs
    bool random_ties = false;       // default: lowest index wins
};

struct OptimizationResult {
    std::vector<Pose> best_actions;    // one suggested action per epoch
    std::vector<double> best_values;   // explicit CRMI of each suggestion
    std::vector<Pose> all_actions;     // every explicitly evaluated action
    std::vector<double> all_values;    // including initial samples for bo_loop
    int epochs_run = 0;
    long long explicit_evals = 0;      // evaluator calls incurred
};

enum class SurrogateBackend { gp, bki };

using CrmiFn = std::function<double(const Pose&)>;

// Trade-off factor for epoch t (1-based). The lemma1 schedule evaluates
// 2 ln(|D| t^2 pi^2 / (6 delta)) for a decision set of the given size.
double ucb_alpha(const UCBConfig& cfg, int epoch_t, std::size_t decision_set_size);

// f^I = mean + sqrt(alpha(t)) * std per query.
std::vector<double> ucb(const Prediction& pred, const UCBConfig& cfg, int epoch_t,
                        std::size_t decision_set_size);

// Multi-epoch surrogate optimization: per epoch, predict over the remaining
// queries, pick the argmax of the union {f^I over queries, y over samples},
// explicitly evaluate fresh picks and fold them into the sample set, and
// record the (action, explicit value) pair. Runs until n_epoch or the query
// set is exhausted. rng is only consulted when cfg.random_ties is set.
OptimizationResult bo_loop(const SampleSet& initial, const std::vector<Pose>& queries,
                           SurrogateBackend backend, const CrmiFn& evaluate,
                           const KernelConfig& kcfg, const BKIConfig& bcfg,
                           const OptimizeConfig& cfg, std::mt19937* rng = nullptr);

// Exhaustive baseline: explicit CRMI of every action, singleton argmax.
OptimizationResult naive_greedy(const std::vector<Pose>& actions, const CrmiFn& evaluate,
                                bool random_ties = false, std::mt19937* rng = nullptr);

}  // namespace infoscout
