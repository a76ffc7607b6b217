#pragma once

#include <span>
#include <string>
#include <vector>

#include "infoscout/geometry.hpp"
#include "infoscout/sensor.hpp"

namespace infoscout {

// Single-cell non-parametric occupancy belief: a pmf over the occupancy
// values {0, lambda_m, 2*lambda_m, ..., 1}.
struct CellBelief {
    std::vector<double> pmf;
};

int bin_count(double lambda_m);  // round(1/lambda_m) + 1; validates lambda_m

double expected_occupancy(std::span<const double> pmf, double lambda_m);
double belief_variance(std::span<const double> pmf, double lambda_m);

// Per-cell occupancy beliefs for the whole grid, stored flat (cell-major).
// Expected occupancy and bin entropy are cached per cell and refreshed by
// commit() after a cell's pmf is rewritten.
struct BeliefMap {
    GridGeometry geom;
    double lambda_m = 0.1;
    int bins = 11;
    std::vector<double> pmf;   // cell_count() * bins
    std::vector<double> mhat;  // cached expected occupancy per cell
    std::vector<double> hbin;  // cached pmf entropy per cell, bits

    static BeliefMap uniform(const GridGeometry& geom, double lambda_m);

    std::span<double> cell(std::size_t i) {
        return {pmf.data() + i * bins, static_cast<std::size_t>(bins)};
    }
    std::span<const double> cell(std::size_t i) const {
        return {pmf.data() + i * bins, static_cast<std::size_t>(bins)};
    }
    double expected(std::size_t i) const { return mhat[i]; }
    double bin_value(int b) const { return b * lambda_m; }
    void commit(std::size_t i);
};

struct CrmConfig {
    // Relative weight of the residual no-return cause; 1.0 keeps the cause
    // decomposition an exact probability partition.
    double no_return_weight = 1.0;
    // The range-likelihood std is floored at this fraction of the cell size
    // so that noise-free measurements stay numerically resolvable.
    double sigma_floor_frac = 0.25;
};

struct UpdateStats {
    int updated_cells = 0;
    int degenerate_fallbacks = 0;  // all-zero posteriors replaced by the prior
};

double effective_range_sigma(const SensorConfig& cfg, double resolution, const CrmConfig& crm);

// Bayes-updates every chain cell of one beam from its measurement, mixing
// Gaussian range likelihoods over the beam's cause decomposition. Cells whose
// range lies beyond the measured return (plus one cell) are left unchanged.
// All cells update from the same pre-measurement snapshot.
UpdateStats update_cell_chain(BeliefMap& belief, const Beam& beam, const SensorConfig& cfg,
                              const CrmConfig& crm);

// Applies update_cell_chain for every beam of a scan.
UpdateStats update_with_scan(BeliefMap& belief, const Scan& scan, const SensorConfig& cfg,
                             const CrmConfig& crm);

// Sum over cells of the binary entropy of expected occupancy, bits. An
// unobserved (uniform) cell contributes exactly 1 bit.
double map_entropy(const BeliefMap& belief);

// Fraction of cells whose expected occupancy deviates from 0.5 by more than
// epsilon.
double coverage(const BeliefMap& belief, double epsilon);

// Writes the expected-occupancy map in the ISMAP1 gray format plus a
// per-cell variance sidecar in the same layout (ISVARF1, float cells).
void save_belief(const BeliefMap& belief, const std::string& mean_path,
                 const std::string& var_path);

}  // namespace infoscout
