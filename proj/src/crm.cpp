#include "infoscout/crm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "infoscout/stats.hpp"

namespace infoscout {

int bin_count(double lambda_m) {
    if (!(lambda_m > 0.0) || lambda_m > 1.0)
        throw std::invalid_argument("lambda_m must be in (0, 1]");
    double inv = 1.0 / lambda_m;
    long k = std::lround(inv);
    if (std::abs(inv - k) > 1e-9)
        throw std::invalid_argument("1/lambda_m must be an integer bin count");
    return static_cast<int>(k) + 1;
}

double expected_occupancy(std::span<const double> pmf, double lambda_m) {
    double m = 0.0;
    for (std::size_t b = 0; b < pmf.size(); ++b) m += pmf[b] * (b * lambda_m);
    return m;
}

double belief_variance(std::span<const double> pmf, double lambda_m) {
    double m = expected_occupancy(pmf, lambda_m);
    double s = 0.0;
    for (std::size_t b = 0; b < pmf.size(); ++b) {
        double d = b * lambda_m - m;
        s += pmf[b] * d * d;
    }
    return s;
}

BeliefMap BeliefMap::uniform(const GridGeometry& geom, double lambda_m) {
    BeliefMap b;
    b.geom = geom;
    b.lambda_m = lambda_m;
    b.bins = bin_count(lambda_m);
    b.pmf.assign(geom.cell_count() * b.bins, 1.0 / b.bins);
    b.mhat.assign(geom.cell_count(), 0.5);
    b.hbin.assign(geom.cell_count(), std::log2(static_cast<double>(b.bins)));
    return b;
}

void BeliefMap::commit(std::size_t i) {
    auto c = cell(i);
    mhat[i] = expected_occupancy(c, lambda_m);
    hbin[i] = entropy_bits(c);
}

double effective_range_sigma(const SensorConfig& cfg, double resolution, const CrmConfig& crm) {
    return std::max(cfg.range_noise_sigma, crm.sigma_floor_frac * resolution);
}

UpdateStats update_cell_chain(BeliefMap& belief, const Beam& beam, const SensorConfig& cfg,
                              const CrmConfig& crm) {
    UpdateStats stats;
    const std::size_t n = beam.cell_chain.size();
    if (n == 0) return stats;
    const double res = belief.geom.resolution;
    const double sigma = effective_range_sigma(cfg, res, crm);
    const double z = beam.measured_range;
    const bool max_return = beam.max_range_return;
    const double w_nr = crm.no_return_weight;

    // Snapshot of expected occupancies; every cell updates from the same
    // pre-measurement belief.
    std::vector<double> m(n);
    for (std::size_t l = 0; l < n; ++l) m[l] = belief.mhat[beam.cell_chain[l]];

    // pre[l] = prod_{j<l} (1 - m_j); pre[n] spans the whole chain.
    std::vector<double> pre(n + 1);
    pre[0] = 1.0;
    for (std::size_t l = 0; l < n; ++l) pre[l + 1] = pre[l] * (1.0 - m[l]);

    // Range likelihood per cause. Finite returns use the Gaussian density at
    // the measured range; max-range returns use each cause's tail mass beyond
    // the sensor limit plus the full no-return cause.
    std::vector<double> g(n);
    double g_nr;
    if (max_return) {
        for (std::size_t l = 0; l < n; ++l)
            g[l] = 1.0 - normal_cdf(cfg.max_range, beam.cell_ranges[l], sigma);
        g_nr = 1.0;
    } else {
        for (std::size_t l = 0; l < n; ++l) g[l] = normal_pdf(z, beam.cell_ranges[l], sigma);
        g_nr = 0.0;
    }

    std::vector<double> post(belief.bins);
    for (std::size_t k = 0; k < n; ++k) {
        if (!max_return && beam.cell_ranges[k] > z + res) continue;  // beyond the return

        // Likelihood of the measurement given cell k at occupancy v is the
        // affine ratio (a + b*v) / (c + d*v) over the cause decomposition with
        // m_k replaced by v.
        double a = 0.0, b = 0.0;
        for (std::size_t l = 0; l < k; ++l) a += m[l] * pre[l] * g[l];
        b += pre[k] * g[k];
        double tail = 0.0;       // sum over causes behind cell k, excluding (1-m_k)
        double run = pre[k];     // prod_{j<l, j!=k} (1 - m_j)
        for (std::size_t l = k + 1; l < n; ++l) {
            tail += m[l] * run * g[l];
            run *= (1.0 - m[l]);
        }
        double p_nr_excl = run;  // prod_{j != k} (1 - m_j)
        tail += w_nr * p_nr_excl * g_nr;
        a += tail;
        b -= tail;

        double c = 1.0, d = 0.0;
        if (w_nr != 1.0) {
            c = 1.0 - (1.0 - w_nr) * p_nr_excl;
            d = (1.0 - w_nr) * p_nr_excl;
        }

        std::size_t idx = beam.cell_chain[k];
        auto prior = belief.cell(idx);
        double total = 0.0;
        for (int bin = 0; bin < belief.bins; ++bin) {
            double v = belief.bin_value(bin);
            double like = (a + b * v) / (c + d * v);
            double p = prior[bin] * std::max(like, 0.0);
            post[bin] = p;
            total += p;
        }
        ++stats.updated_cells;
        if (!(total > 1e-300)) {
            ++stats.degenerate_fallbacks;  // keep the prior
            continue;
        }
        for (int bin = 0; bin < belief.bins; ++bin) prior[bin] = post[bin] / total;
        belief.commit(idx);
    }
    return stats;
}

UpdateStats update_with_scan(BeliefMap& belief, const Scan& scan, const SensorConfig& cfg,
                             const CrmConfig& crm) {
    UpdateStats stats;
    for (const Beam& beam : scan.beams) {
        UpdateStats s = update_cell_chain(belief, beam, cfg, crm);
        stats.updated_cells += s.updated_cells;
        stats.degenerate_fallbacks += s.degenerate_fallbacks;
    }
    return stats;
}

double map_entropy(const BeliefMap& belief) {
    double h = 0.0;
    for (double m : belief.mhat) h += binary_entropy_bits(m);
    return h;
}

double coverage(const BeliefMap& belief, double epsilon) {
    if (belief.mhat.empty()) return 0.0;
    std::size_t explored = 0;
    for (double m : belief.mhat)
        if (std::abs(m - 0.5) > epsilon) ++explored;
    return static_cast<double>(explored) / belief.mhat.size();
}

void save_belief(const BeliefMap& belief, const std::string& mean_path,
                 const std::string& var_path) {
    {
        std::ofstream out(mean_path);
        if (!out) throw std::runtime_error("cannot write belief map: " + mean_path);
        out << "ISMAP1\n" << belief.geom.width_cells << ' ' << belief.geom.height_cells << '\n';
        out << belief.geom.resolution << '\n';
        for (int cy = 0; cy < belief.geom.height_cells; ++cy) {
            for (int cx = 0; cx < belief.geom.width_cells; ++cx) {
                int v = static_cast<int>(std::lround(belief.mhat[belief.geom.index(cx, cy)] * 255.0));
                out << std::clamp(v, 0, 255)
                    << (cx + 1 == belief.geom.width_cells ? '\n' : ' ');
            }
        }
    }
    std::ofstream out(var_path);
    if (!out) throw std::runtime_error("cannot write variance map: " + var_path);
    out << "ISVARF1\n" << belief.geom.width_cells << ' ' << belief.geom.height_cells << '\n';
    out << belief.geom.resolution << '\n';
    out.precision(9);
    for (int cy = 0; cy < belief.geom.height_cells; ++cy) {
        for (int cx = 0; cx < belief.geom.width_cells; ++cx) {
            std::size_t i = belief.geom.index(cx, cy);
            out << belief_variance(belief.cell(i), belief.lambda_m)
                << (cx + 1 == belief.geom.width_cells ? '\n' : ' ');
        }
    }
}

}  // namespace infoscout
