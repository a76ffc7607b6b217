#include "infoscout/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace infoscout {

namespace {

constexpr double kGramJitter = 1e-8;

}  // namespace

double action_distance(const Pose& a, const Pose& b, double heading_weight) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    double dh = heading_weight * wrap_angle(a.heading - b.heading);
    return std::sqrt(dx * dx + dy * dy + dh * dh);
}

double matern52(double r, double length_scale) {
    if (!(length_scale > 0.0)) throw std::invalid_argument("length_scale must be positive");
    double s = std::sqrt(5.0) * r / length_scale;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

double matern52(const Pose& a, const Pose& b, const KernelConfig& cfg) {
    return matern52(action_distance(a, b, cfg.heading_weight), cfg.length_scale);
}

Prediction gp_posterior(const SampleSet& train, const std::vector<Pose>& queries,
                        const KernelConfig& cfg, std::vector<double>* full_cov) {
    const std::size_t n = train.actions.size();
    if (n == 0 || train.values.size() != n)
        throw std::invalid_argument("training set must hold matching actions and values");
    for (double v : train.values)
        if (!std::isfinite(v)) throw std::invalid_argument("training values must be finite");

    double ymean = 0.0;
    for (double v : train.values) ymean += v;
    ymean /= static_cast<double>(n);
    if (!(cfg.gp_amplitude > 0.0))
        throw std::invalid_argument("gp_amplitude must be positive");
    const double amp = cfg.gp_amplitude;
    const double noise = train.noise_sigma * train.noise_sigma + kGramJitter;

    Eigen::MatrixXd gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double k = amp * matern52(train.actions[i], train.actions[j], cfg);
            gram(i, j) = k;
            gram(j, i) = k;
        }
        gram(i, i) += noise;
    }
    Eigen::VectorXd resid(n);
    for (std::size_t i = 0; i < n; ++i) resid(i) = train.values[i] - ymean;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Eigen::VectorXd alpha = ldlt.solve(resid);

    const std::size_t q = queries.size();
    Eigen::MatrixXd kstar(n, q);
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t i = 0; i < n; ++i)
            kstar(i, j) = amp * matern52(train.actions[i], queries[j], cfg);

    Prediction pred;
    pred.mean.resize(q);
    pred.variance.resize(q);
    Eigen::MatrixXd v = ldlt.solve(kstar);
    for (std::size_t j = 0; j < q; ++j) {
        pred.mean[j] = ymean + kstar.col(j).dot(alpha);
        double var = amp - kstar.col(j).dot(v.col(j));
        pred.variance[j] = std::max(var, 0.0);
    }
    if (full_cov != nullptr) {
        full_cov->assign(q * q, 0.0);
        for (std::size_t a = 0; a < q; ++a) {
            for (std::size_t b = 0; b < q; ++b) {
                double prior = amp * matern52(queries[a], queries[b], cfg);
                (*full_cov)[a * q + b] = prior - kstar.col(a).dot(v.col(b));
            }
        }
    }
    return pred;
}

Prediction bki_posterior(const SampleSet& train, const std::vector<Pose>& queries,
                         const KernelConfig& kcfg, const BKIConfig& bcfg) {
    const std::size_t n = train.actions.size();
    if (n == 0 || train.values.size() != n)
        throw std::invalid_argument("training set must hold matching actions and values");
    Prediction pred;
    pred.mean.resize(queries.size());
    pred.variance.resize(queries.size());
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        double kbar = 0.0, ybar = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double k = matern52(queries[qi], train.actions[i], kcfg);
            kbar += k;
            ybar += k * train.values[i];
        }
        double denom = bcfg.zeta + kbar;
        if (denom > 0.0) {
            pred.mean[qi] = (ybar + bcfg.zeta * bcfg.theta0) / denom;
            pred.variance[qi] = bcfg.sigma_theta * bcfg.sigma_theta / denom;
        } else {
            pred.mean[qi] = bcfg.theta0;
            pred.variance[qi] = std::numeric_limits<double>::infinity();
        }
    }
    return pred;
}

QueryIndex::QueryIndex(std::vector<Pose> queries, const KernelConfig& cfg)
    : queries_(std::move(queries)), cfg_(cfg) {
    order_.resize(queries_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!order_.empty()) build(0, order_.size(), 0);
    kbar_.assign(queries_.size(), 0.0);
    ybar_.assign(queries_.size(), 0.0);
}

void QueryIndex::build(std::size_t lo, std::size_t hi, int depth) {
    if (hi - lo <= 1) return;
    std::size_t mid = lo + (hi - lo) / 2;
    auto key = [&](std::size_t idx) {
        return depth % 2 == 0 ? queries_[idx].x : queries_[idx].y;
    };
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
}

void QueryIndex::gather(std::size_t lo, std::size_t hi, int depth, double cx, double cy,
                        double radius, std::vector<std::size_t>& out) const {
    if (lo >= hi) return;
    std::size_t mid = lo + (hi - lo) / 2;
    const Pose& p = queries_[order_[mid]];
    double dx = p.x - cx, dy = p.y - cy;
    if (dx * dx + dy * dy <= radius * radius) out.push_back(order_[mid]);
    double split = depth % 2 == 0 ? p.x : p.y;
    double delta = (depth % 2 == 0 ? cx : cy) - split;
    if (delta <= radius) gather(lo, mid, depth + 1, cx, cy, radius, out);
    if (-delta <= radius) gather(mid + 1, hi, depth + 1, cx, cy, radius, out);
}

std::size_t QueryIndex::accumulate(const Pose& action, double value) {
    if (queries_.empty()) return 0;
    const double radius = cfg_.truncation_radius * cfg_.length_scale;
    if (!std::isfinite(radius)) {
        for (std::size_t qi = 0; qi < queries_.size(); ++qi) {
            double k = matern52(queries_[qi], action, cfg_);
            kbar_[qi] += k;
            ybar_[qi] += k * value;
        }
        return queries_.size();
    }
    touch_.clear();
    gather(0, order_.size(), 0, action.x, action.y, radius, touch_);
    std::size_t touched = 0;
    for (std::size_t qi : touch_) {
        double r = action_distance(queries_[qi], action, cfg_.heading_weight);
        if (r > radius) continue;
        double k = matern52(r, cfg_.length_scale);
        kbar_[qi] += k;
        ybar_[qi] += k * value;
        ++touched;
    }
    return touched;
}

Prediction QueryIndex::read(const BKIConfig& bcfg) const {
    Prediction pred;
    pred.mean.resize(queries_.size());
    pred.variance.resize(queries_.size());
    for (std::size_t qi = 0; qi < queries_.size(); ++qi) {
        double denom = bcfg.zeta + kbar_[qi];
        if (denom > 0.0) {
            pred.mean[qi] = (ybar_[qi] + bcfg.zeta * bcfg.theta0) / denom;
            pred.variance[qi] = bcfg.sigma_theta * bcfg.sigma_theta / denom;
        } else {
            pred.mean[qi] = bcfg.theta0;
            pred.variance[qi] = std::numeric_limits<double>::infinity();
        }
    }
    return pred;
}

void QueryIndex::reset() {
    std::fill(kbar_.begin(), kbar_.end(), 0.0);
    std::fill(ybar_.begin(), ybar_.end(), 0.0);
}

QueryIndex build_query_index(std::vector<Pose> queries, const KernelConfig& cfg) {
    return QueryIndex(std::move(queries), cfg);
}

}  // namespace infoscout
