#include "infoscout/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace infoscout {

namespace {

constexpr double kGramJitter = 1e-8;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Argmax with deterministic lowest-index tie-breaking, or uniform choice
// among exact ties when requested.
template <typename GetValue>
std::size_t argmax_over(std::size_t count, GetValue&& value, bool random_ties,
                        std::mt19937* rng) {
    std::size_t best = kNone;
    double best_v = -std::numeric_limits<double>::infinity();
    std::size_t tie_count = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double v = value(i);
        if (std::isnan(v)) continue;
        if (best == kNone || v > best_v) {
            best = i;
            best_v = v;
            tie_count = 1;
        } else if (v == best_v && random_ties && rng != nullptr) {
            // reservoir choice keeps every tied index equally likely
            ++tie_count;
            std::uniform_int_distribution<std::size_t> pick(0, tie_count - 1);
            if (pick(*rng) == 0) best = i;
        }
    }
    return best;
}

bool same_action(const Pose& a, const Pose& b) {
    return a.x == b.x && a.y == b.y && a.heading == b.heading;
}

// Incrementally cached GP over a growing sample set and a fixed query pool.
// Stores unscaled Matern values; the amplitude rescales them each epoch so
// cached and from-scratch paths produce bitwise-identical predictions.
struct GpCache {
    std::vector<std::vector<double>> train_rows;  // row i: m52 to samples 0..i
    std::vector<std::vector<double>> query_rows;  // row i: m52 to every query
};

void gp_extend_cache(GpCache& cache, const SampleSet& train, const std::vector<Pose>& queries,
                     const KernelConfig& kcfg) {
    for (std::size_t i = cache.train_rows.size(); i < train.actions.size(); ++i) {
        std::vector<double> row(i + 1);
        for (std::size_t j = 0; j <= i; ++j)
            row[j] = matern52(train.actions[i], train.actions[j], kcfg);
        cache.train_rows.push_back(std::move(row));
        std::vector<double> qrow(queries.size());
        for (std::size_t q = 0; q < queries.size(); ++q)
            qrow[q] = matern52(train.actions[i], queries[q], kcfg);
        cache.query_rows.push_back(std::move(qrow));
    }
}

Prediction gp_predict_cached(const GpCache& cache, const SampleSet& train,
                             const std::vector<std::size_t>& active, const KernelConfig& kcfg) {
    const std::size_t n = train.actions.size();
    double ymean = 0.0;
    for (double v : train.values) ymean += v;
    ymean /= static_cast<double>(n);
    if (!(kcfg.gp_amplitude > 0.0))
        throw std::invalid_argument("gp_amplitude must be positive");
    const double amp = kcfg.gp_amplitude;
    const double noise = train.noise_sigma * train.noise_sigma + kGramJitter;

    Eigen::MatrixXd gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double k = amp * cache.train_rows[i][j];
            gram(i, j) = k;
            gram(j, i) = k;
        }
        gram(i, i) += noise;
    }
    Eigen::VectorXd resid(n);
    for (std::size_t i = 0; i < n; ++i) resid(i) = train.values[i] - ymean;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Eigen::VectorXd alpha = ldlt.solve(resid);

    Eigen::MatrixXd kstar(n, active.size());
    for (std::size_t c = 0; c < active.size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            kstar(i, c) = amp * cache.query_rows[i][active[c]];
    Eigen::MatrixXd v = ldlt.solve(kstar);

    Prediction pred;
    pred.mean.resize(active.size());
    pred.variance.resize(active.size());
    for (std::size_t c = 0; c < active.size(); ++c) {
        pred.mean[c] = ymean + kstar.col(c).dot(alpha);
        pred.variance[c] = std::max(amp - kstar.col(c).dot(v.col(c)), 0.0);
    }
    return pred;
}

}  // namespace

double ucb_alpha(const UCBConfig& cfg, int epoch_t, std::size_t decision_set_size) {
    if (epoch_t < 1) throw std::invalid_argument("epoch index is 1-based");
    if (cfg.schedule == UCBConfig::Schedule::constant) {
        if (cfg.alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
        return cfg.alpha;
    }
    if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0))
        throw std::invalid_argument("lemma1 schedule needs delta in (0, 1)");
    if (decision_set_size == 0) throw std::invalid_argument("empty decision set");
    double t = static_cast<double>(epoch_t);
    double pi2 = std::numbers::pi * std::numbers::pi;
    return 2.0 * std::log(static_cast<double>(decision_set_size) * t * t * pi2 /
                          (6.0 * cfg.delta));
}

std::vector<double> ucb(const Prediction& pred, const UCBConfig& cfg, int epoch_t,
                        std::size_t decision_set_size) {
    double a = ucb_alpha(cfg, epoch_t, decision_set_size);
    double root = std::sqrt(a);
    std::vector<double> f(pred.mean.size());
    for (std::size_t i = 0; i < pred.mean.size(); ++i)
        f[i] = pred.mean[i] + root * std::sqrt(std::max(pred.variance[i], 0.0));
    return f;
}

OptimizationResult bo_loop(const SampleSet& initial, const std::vector<Pose>& queries,
                           SurrogateBackend backend, const CrmiFn& evaluate,
                           const KernelConfig& kcfg, const BKIConfig& bcfg,
                           const OptimizeConfig& cfg, std::mt19937* rng) {
    if (initial.actions.empty() || initial.actions.size() != initial.values.size())
        throw std::invalid_argument("initial sample set must be nonempty and consistent");
    if (queries.empty()) throw std::invalid_argument("query set must be nonempty");
    if (cfg.n_epoch < 1) throw std::invalid_argument("n_epoch must be at least 1");

    const std::size_t decision_set_size = initial.actions.size() + queries.size();
    SampleSet train = initial;
    std::vector<std::size_t> active(queries.size());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;

    QueryIndex index(queries, kcfg);
    GpCache gp_cache;
    if (backend == SurrogateBackend::bki && cfg.cache_kernel)
        for (std::size_t i = 0; i < train.actions.size(); ++i)
            index.accumulate(train.actions[i], train.values[i]);

    OptimizationResult result;
    for (int epoch = 1; epoch <= cfg.n_epoch; ++epoch) {
        if (active.empty()) break;

        Prediction pred;
        if (backend == SurrogateBackend::bki) {
            if (!cfg.cache_kernel) {
                index.reset();
                for (std::size_t i = 0; i < train.actions.size(); ++i)
                    index.accumulate(train.actions[i], train.values[i]);
            }
            Prediction all = index.read(bcfg);
            pred.mean.resize(active.size());
            pred.variance.resize(active.size());
            for (std::size_t c = 0; c < active.size(); ++c) {
                pred.mean[c] = all.mean[active[c]];
                pred.variance[c] = all.variance[active[c]];
            }
        } else if (cfg.cache_kernel) {
            gp_extend_cache(gp_cache, train, queries, kcfg);
            pred = gp_predict_cached(gp_cache, train, active, kcfg);
        } else {
            std::vector<Pose> poses(active.size());
            for (std::size_t c = 0; c < active.size(); ++c) poses[c] = queries[active[c]];
            pred = gp_posterior(train, poses, kcfg);
        }

        std::vector<double> f = ucb(pred, cfg.ucb, epoch, decision_set_size);
        std::size_t best_c =
            argmax_over(f.size(), [&](std::size_t i) { return f[i]; }, cfg.random_ties, rng);
        if (best_c == kNone) break;

        if (cfg.incumbent_compare) {
            std::size_t inc = argmax_over(
                train.values.size(), [&](std::size_t i) { return train.values[i]; },
                cfg.random_ties, rng);
            if (train.values[inc] > f[best_c]) {
                result.best_actions.push_back(train.actions[inc]);
                result.best_values.push_back(train.values[inc]);
                ++result.epochs_run;
                continue;
            }
        }

        const std::size_t qi = active[best_c];
        const Pose& pick = queries[qi];
        std::size_t coincident = kNone;
        for (std::size_t i = 0; i < train.actions.size(); ++i)
            if (same_action(train.actions[i], pick)) {
                coincident = i;
                break;
            }
        double y;
        if (coincident != kNone) {
            y = train.values[coincident];
        } else {
            y = evaluate(pick);
            ++result.explicit_evals;
            train.actions.push_back(pick);
            train.values.push_back(y);
            if (backend == SurrogateBackend::bki && cfg.cache_kernel) index.accumulate(pick, y);
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_c));
        }
        result.best_actions.push_back(pick);
        result.best_values.push_back(y);
        ++result.epochs_run;
    }
    result.all_actions = std::move(train.actions);
    result.all_values = std::move(train.values);
    return result;
}

OptimizationResult naive_greedy(const std::vector<Pose>& actions, const CrmiFn& evaluate,
                                bool random_ties, std::mt19937* rng) {
    if (actions.empty()) throw std::invalid_argument("action set must be nonempty");
    std::vector<double> values(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) values[i] = evaluate(actions[i]);
    std::size_t best = argmax_over(
        values.size(), [&](std::size_t i) { return values[i]; }, random_ties, rng);
    OptimizationResult result;
    result.best_actions.push_back(actions[best]);
    result.best_values.push_back(values[best]);
    result.all_actions = actions;
    result.all_values = std::move(values);
    result.epochs_run = 1;
    result.explicit_evals = static_cast<long long>(actions.size());
    return result;
}

}  // namespace infoscout
