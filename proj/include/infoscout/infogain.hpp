#pragma once

#include <cstdint>
#include <vector>

#include "infoscout/crm.hpp"
#include "infoscout/sensor.hpp"

namespace infoscout {

struct InfoEvalConfig {
    double lambda_z = 0.1;           // measurement-outcome resolution, fraction of max range
    double lambda_m = 0.1;           // occupancy resolution (must match the belief map)
    double occupied_threshold = 0.65;  // virtual-scan blocking threshold on expected occupancy
};

struct MiStats {
    long long cell_terms = 0;     // per-cell mutual-information terms computed
    long long outcome_terms = 0;  // finite measurement-outcome bins visited
    long long clamped = 0;        // terms below -1e-9 clamped to zero
};

// Mutual information between one chain cell's occupancy and the beam's next
// measurement, in bits: prior pmf entropy minus the expected posterior pmf
// entropy over the discretized measurement-outcome distribution. Outcomes are
// binned at lambda_z * max_range with an explicit no-return atom; bin masses
// are Gaussian CDF differences so the outcome distribution is exactly
// normalized. Result is clamped to be non-negative.
double cell_beam_mi(const std::vector<CellBelief>& chain, const std::vector<double>& ranges,
                    std::size_t cell_index, const SensorConfig& cfg, const InfoEvalConfig& info,
                    const CrmConfig& crm, MiStats* stats = nullptr);

// Sum of cell_beam_mi over every cell of one beam's chain, evaluated against
// the belief map.
double beam_mi(const BeliefMap& belief, const Beam& beam, const SensorConfig& cfg,
               const InfoEvalConfig& info, const CrmConfig& crm, MiStats* stats = nullptr);

// CRMI of a candidate pose: a virtual scan against the belief, then the sum of
// per-(beam, cell) mutual-information terms. Pure with respect to the belief.
double evaluate_crmi(const BeliefMap& belief, const Pose& pose, const SensorConfig& cfg,
                     const InfoEvalConfig& info, const CrmConfig& crm, MiStats* stats = nullptr);

}  // namespace infoscout
