#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "infoscout/geometry.hpp"

namespace infoscout {

struct KernelConfig {
    double length_scale = 1.5;       // action-space meters
    double truncation_radius = 4.0;  // multiples of length_scale, index path only
    double heading_weight = 0.5;     // meters per radian of wrapped heading gap
    double gp_amplitude = 1e4;       // GP prior variance, bits^2; sigma_theta^2 by default
                                     // so both surrogates start from the same uncertainty
};

struct BKIConfig {
    double zeta = 0.001;        // prior confidence
    double theta0 = 0.0;        // prior mean, bits
    double sigma_theta = 100.0; // likelihood std-dev, bits
};

// Explicitly evaluated (action, value) pairs shared by both surrogates.
struct SampleSet {
    std::vector<Pose> actions;
    std::vector<double> values;      // bits
    double noise_sigma = 1e-2;       // observation noise std-dev, bits
};

struct Prediction {
    std::vector<double> mean;      // bits
    std::vector<double> variance;  // bits^2, per query
};

// Distance over (x, y, heading_weight * wrapped heading gap).
double action_distance(const Pose& a, const Pose& b, double heading_weight);

// Matern 5/2 correlation at separation r.
double matern52(double r, double length_scale);
double matern52(const Pose& a, const Pose& b, const KernelConfig& cfg);

// Exact GP regression posterior at the queries. The prior mean is the
// training mean, so predictions run on centered residuals; the prior
// variance is cfg.gp_amplitude. When full_cov is given it receives the
// dense row-major query covariance.
Prediction gp_posterior(const SampleSet& train, const std::vector<Pose>& queries,
                        const KernelConfig& cfg, std::vector<double>* full_cov = nullptr);

// Bayesian kernel inference closed form: per query, kbar = sum_i k(q, x_i)
// and ybar = sum_i k(q, x_i) y_i give mean (ybar + zeta*theta0)/(zeta + kbar)
// and variance sigma_theta^2/(zeta + kbar). Dense double loop, no
// truncation. Zero support with zeta = 0 degrades to (theta0, +inf).
Prediction bki_posterior(const SampleSet& train, const std::vector<Pose>& queries,
                         const KernelConfig& kcfg, const BKIConfig& bcfg);

// Incremental BKI accumulator over a fixed query set with a kd-tree on the
// query positions. Samples accumulate one at a time; queries farther than
// truncation_radius * length_scale in the action metric contribute zero.
// The position tree returns a superset (position distance never exceeds the
// action distance) that is then filtered exactly. With a non-finite
// truncation radius the accumulation visits every query in insertion order
// and reproduces the dense double loop bitwise.
class QueryIndex {
  public:
    QueryIndex(std::vector<Pose> queries, const KernelConfig& cfg);

    // Folds one training sample into the per-query accumulators, returning
    // how many queries it touched.
    std::size_t accumulate(const Pose& action, double value);

    Prediction read(const BKIConfig& bcfg) const;
    void reset();

    std::size_t size() const { return queries_.size(); }
    const std::vector<Pose>& queries() const { return queries_; }

  private:
    void build(std::size_t lo, std::size_t hi, int depth);
    void gather(std::size_t lo, std::size_t hi, int depth, double cx, double cy, double radius,
                std::vector<std::size_t>& out) const;

    std::vector<Pose> queries_;
    KernelConfig cfg_;
    std::vector<std::size_t> order_;  // kd-tree: median layout over [lo, hi)
    std::vector<double> kbar_;
    std::vector<double> ybar_;
    std::vector<std::size_t> touch_;  // scratch for radius results
};

QueryIndex build_query_index(std::vector<Pose> queries, const KernelConfig& cfg);

}  // namespace infoscout
