#include "infoscout/infogain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "infoscout/stats.hpp"

namespace infoscout {

namespace {

constexpr double kMassWindowSigmas = 5.0;

// One beam's chain as flat arrays so the same MI core serves both the belief
// map fast path and caller-built test chains.
struct ChainView {
    std::size_t n = 0;
    int bins = 0;
    double lambda_m = 0.1;
    const double* const* pmfs = nullptr;  // n pointers, each bins long
    const double* mhat = nullptr;
    const double* hbin = nullptr;  // prior pmf entropy, bits
    const double* ranges = nullptr;
};

struct MiWorkspace {
    std::vector<double> mass;    // n x (S+1) cause-outcome masses
    std::vector<double> prefix;  // S+1, causes before the current cell
    std::vector<double> tail;    // S+1, causes after the current cell
    std::vector<double> pre;     // n+1 prefix products of (1 - mhat)
    std::vector<double> mi;
    std::vector<const double*> pmf_ptrs;
    std::vector<double> mh, hb;
};

MiWorkspace& workspace() {
    thread_local MiWorkspace ws;
    return ws;
}

int outcome_bins(const InfoEvalConfig& info) {
    if (!(info.lambda_z > 0.0) || info.lambda_z > 1.0)
        throw std::invalid_argument("lambda_z must be in (0, 1]");
    double inv = 1.0 / info.lambda_z;
    long s = std::lround(inv);
    if (std::abs(inv - s) > 1e-9)
        throw std::invalid_argument("1/lambda_z must be an integer bin count");
    return static_cast<int>(s);
}

// Fills mass[l * (S+1) + i] with the probability that cause l's return lands
// in outcome bin i; bin S is the no-return atom. Each row sums to one
// exactly: tail mass outside the +-5 sigma window folds into the window's
// edge bins, and everything past max range lands on the atom.
void build_cause_masses(const ChainView& chain, double sigma, double z_max, int S,
                        std::vector<double>& mass) {
    const double step = z_max / S;
    mass.assign(chain.n * (S + 1), 0.0);
    for (std::size_t l = 0; l < chain.n; ++l) {
        double r = chain.ranges[l];
        double* row = mass.data() + l * (S + 1);
        if (sigma <= 0.0) {
            int i = static_cast<int>(std::floor(r / step));
            if (i >= S)
                row[S] = 1.0;
            else
                row[std::max(i, 0)] = 1.0;
            continue;
        }
        int lo = std::max(0, static_cast<int>(std::floor((r - kMassWindowSigmas * sigma) / step)));
        int hi = static_cast<int>(std::floor((r + kMassWindowSigmas * sigma) / step));
        lo = std::min(lo, S - 1);
        hi = std::min(std::max(hi, lo), S - 1);
        double cdf_lo = lo == 0 ? 0.0 : normal_cdf(lo * step, r, sigma);
        double prev = cdf_lo;
        for (int i = lo; i <= hi; ++i) {
            double edge = (i + 1 == S) ? z_max : (i + 1) * step;
            double c = normal_cdf(edge, r, sigma);
            row[i] = c - prev;
            prev = c;
        }
        row[lo] += cdf_lo;
        double upper = 1.0 - prev;
        if (hi == S - 1)
            row[S] += upper;  // prev is the cdf at max range, so this is the no-return mass
        else
            row[hi] += upper;  // negligible tail inside the range domain
    }
}

// Per-cell MI for every chain cell, written to mi_out (n entries).
void chain_mi(const ChainView& chain, double sigma, const SensorConfig& cfg,
              const InfoEvalConfig& info, const CrmConfig& crm, double* mi_out, MiStats* stats) {
    const std::size_t n = chain.n;
    if (n == 0) return;
    const int S = outcome_bins(info);
    const int K = chain.bins;
    MiWorkspace& ws = workspace();
    build_cause_masses(chain, sigma, cfg.max_range, S, ws.mass);

    ws.pre.resize(n + 1);
    ws.pre[0] = 1.0;
    for (std::size_t l = 0; l < n; ++l) ws.pre[l + 1] = ws.pre[l] * (1.0 - chain.mhat[l]);

    ws.prefix.assign(S + 1, 0.0);
    ws.tail.resize(S + 1);
    const double w_nr = crm.no_return_weight;

    for (std::size_t k = 0; k < n; ++k) {
        const double* mk = ws.mass.data() + k * (S + 1);
        const double h_before = chain.hbin[k];
        if (stats != nullptr) ++stats->cell_terms;
        if (h_before < 1e-12) {
            mi_out[k] = 0.0;
        } else {
            // The outcome likelihood given cell occupancy v is the ratio
            // (a_i + b_i v) / (c + d v): the cause mixture with m_k replaced
            // by v, renormalized when the no-return cause is down-weighted.
            std::fill(ws.tail.begin(), ws.tail.end(), 0.0);
            double run = ws.pre[k];
            for (std::size_t l = k + 1; l < n; ++l) {
                const double* ml = ws.mass.data() + l * (S + 1);
                double wl = chain.mhat[l] * run;
                for (int i = 0; i <= S; ++i) ws.tail[i] += wl * ml[i];
                run *= (1.0 - chain.mhat[l]);
            }
            ws.tail[S] += w_nr * run;

            double c = 1.0, d = 0.0;
            if (w_nr != 1.0) {
                c = 1.0 - (1.0 - w_nr) * run;
                d = (1.0 - w_nr) * run;
            }

            const double* pmf = chain.pmfs[k];
            double w_total = 0.0;
            double eh = 0.0;  // sum of z_i * H(posterior_i)
            for (int i = 0; i <= S; ++i) {
                if (stats != nullptr && i < S) ++stats->outcome_terms;
                double a = ws.prefix[i] + ws.tail[i];
                double b = ws.pre[k] * mk[i] - ws.tail[i];
                if (a <= 1e-300 && a + b <= 1e-300) continue;
                double acc = 0.0;
                double plogp = 0.0;
                for (int bin = 0; bin < K; ++bin) {
                    double v = bin * chain.lambda_m;
                    double like = a + b * v;
                    if (d != 0.0) like /= (c + d * v);
                    double p = pmf[bin] * std::max(like, 0.0);
                    if (p > 0.0) {
                        acc += p;
                        plogp += p * std::log2(p);
                    }
                }
                if (acc > 1e-300) {
                    w_total += acc;
                    eh += acc * std::log2(acc) - plogp;
                }
            }
            double mi = 0.0;
            if (w_total > 1e-300) mi = h_before - eh / w_total;
            if (mi < 0.0) {
                if (mi < -1e-9 && stats != nullptr) ++stats->clamped;
                mi = 0.0;
            }
            mi_out[k] = mi;
        }
        // Advance the running prefix with cell k as a cause at its mean.
        double wk = chain.mhat[k] * ws.pre[k];
        for (int i = 0; i <= S; ++i) ws.prefix[i] += wk * mk[i];
    }
}

}  // namespace

double cell_beam_mi(const std::vector<CellBelief>& chain, const std::vector<double>& ranges,
                    std::size_t cell_index, const SensorConfig& cfg, const InfoEvalConfig& info,
                    const CrmConfig& crm, MiStats* stats) {
    if (chain.empty() || chain.size() != ranges.size())
        throw std::invalid_argument("chain beliefs and ranges must be equal-length and non-empty");
    if (cell_index >= chain.size()) throw std::invalid_argument("cell_index outside chain");
    const std::size_t n = chain.size();
    const int bins = bin_count(info.lambda_m);
    std::vector<const double*> pmfs(n);
    std::vector<double> mh(n), hb(n);
    for (std::size_t l = 0; l < n; ++l) {
        if (static_cast<int>(chain[l].pmf.size()) != bins)
            throw std::invalid_argument("chain pmf size does not match lambda_m");
        double total = 0.0;
        for (double p : chain[l].pmf) {
            if (p < 0.0) throw std::invalid_argument("chain pmf has a negative entry");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("chain pmf is not normalized");
        pmfs[l] = chain[l].pmf.data();
        mh[l] = expected_occupancy(chain[l].pmf, info.lambda_m);
        hb[l] = entropy_bits(chain[l].pmf);
    }
    ChainView view{n, bins, info.lambda_m, pmfs.data(), mh.data(), hb.data(), ranges.data()};
    std::vector<double> mi(n, 0.0);
    chain_mi(view, cfg.range_noise_sigma, cfg, info, crm, mi.data(), stats);
    return mi[cell_index];
}

double beam_mi(const BeliefMap& belief, const Beam& beam, const SensorConfig& cfg,
               const InfoEvalConfig& info, const CrmConfig& crm, MiStats* stats) {
    const std::size_t n = beam.cell_chain.size();
    if (n == 0) return 0.0;
    MiWorkspace& ws = workspace();
    ws.pmf_ptrs.resize(n);
    ws.mh.resize(n);
    ws.hb.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t idx = static_cast<std::size_t>(beam.cell_chain[l]);
        ws.pmf_ptrs[l] = belief.pmf.data() + idx * belief.bins;
        ws.mh[l] = belief.mhat[idx];
        ws.hb[l] = belief.hbin[idx];
    }
    ChainView view{n,            belief.bins,  belief.lambda_m, ws.pmf_ptrs.data(),
                   ws.mh.data(), ws.hb.data(), beam.cell_ranges.data()};
    double sigma = effective_range_sigma(cfg, belief.geom.resolution, crm);
    ws.mi.resize(n);
    chain_mi(view, sigma, cfg, info, crm, ws.mi.data(), stats);
    double total = 0.0;
    for (std::size_t l = 0; l < n; ++l) total += ws.mi[l];
    return total;
}

double evaluate_crmi(const BeliefMap& belief, const Pose& pose, const SensorConfig& cfg,
                     const InfoEvalConfig& info, const CrmConfig& crm, MiStats* stats) {
    Scan scan = virtual_scan(belief, pose, cfg, info.occupied_threshold);
    double total = 0.0;
    for (const Beam& beam : scan.beams) total += beam_mi(belief, beam, cfg, info, crm, stats);
    return total;
}

}  // namespace infoscout
