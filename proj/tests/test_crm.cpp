#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "doctest.h"
#include "infoscout/crm.hpp"
#include "infoscout/stats.hpp"
#include "infoscout/world.hpp"

using namespace infoscout;

namespace {

// Exact-enumeration reference for one beam update: the measurement likelihood
// given the joint occupancy state (v_0..v_{n-1}) is
//   P(z | v) = sum_l v_l prod_{j<l}(1 - v_j) g_l + w_nr prod_j(1 - v_j) g_nr
// and each cell's marginal posterior comes from summing the joint posterior
// over the other cells' bins. P(z | v) is multilinear in the v_l, so this is
// the exact Bayes answer the chain update's mean-substitution must reproduce.
struct ChainOracle {
    std::vector<std::vector<double>> pmf;  // per cell, over bin values
    std::vector<double> ranges;
    double lambda_m = 0.1;

    int bins() const { return static_cast<int>(pmf[0].size()); }
    double value(int b) const { return b * lambda_m; }

    double mhat(std::size_t k) const {
        double m = 0.0;
        for (int b = 0; b < bins(); ++b) m += pmf[k][b] * value(b);
        return m;
    }

    void update(double z, bool max_return, double sigma, double z_max, double w_nr) {
        const std::size_t n = pmf.size();
        std::vector<double> g(n);
        double g_nr;
        if (max_return) {
            for (std::size_t l = 0; l < n; ++l) g[l] = 1.0 - normal_cdf(z_max, ranges[l], sigma);
            g_nr = 1.0;
        } else {
            for (std::size_t l = 0; l < n; ++l) g[l] = normal_pdf(z, ranges[l], sigma);
            g_nr = 0.0;
        }
        std::vector<std::vector<double>> post(n);
        for (std::size_t k = 0; k < n; ++k) post[k].assign(bins(), 0.0);

        std::vector<int> state(n, 0);
        for (;;) {
            double prior = 1.0;
            for (std::size_t l = 0; l < n; ++l) prior *= pmf[l][state[l]];
            double like = 0.0;
            double passed = 1.0;
            for (std::size_t l = 0; l < n; ++l) {
                like += value(state[l]) * passed * g[l];
                passed *= 1.0 - value(state[l]);
            }
            like += w_nr * passed * g_nr;
            double joint = prior * like;
            for (std::size_t k = 0; k < n; ++k) post[k][state[k]] += joint;

            std::size_t d = 0;
            while (d < n && ++state[d] == bins()) state[d++] = 0;
            if (d == n) break;
        }
        for (std::size_t k = 0; k < n; ++k) {
            double total = 0.0;
            for (double p : post[k]) total += p;
            REQUIRE(total > 0.0);
            for (int b = 0; b < bins(); ++b) pmf[k][b] = post[k][b] / total;
        }
    }
};

BeliefMap chain_belief(const std::vector<std::vector<double>>& pmfs, double res) {
    GridGeometry geom{static_cast<int>(pmfs.size()), 1, res, 0.0, 0.0};
    BeliefMap belief = BeliefMap::uniform(geom, 0.1);
    for (std::size_t i = 0; i < pmfs.size(); ++i) {
        auto c = belief.cell(i);
        std::copy(pmfs[i].begin(), pmfs[i].end(), c.begin());
        belief.commit(i);
    }
    return belief;
}

Beam chain_beam(const std::vector<double>& ranges, double z, bool max_return) {
    Beam beam;
    beam.measured_range = z;
    beam.max_range_return = max_return;
    for (std::size_t l = 0; l < ranges.size(); ++l) {
        beam.cell_chain.push_back(static_cast<std::int32_t>(l));
        beam.cell_ranges.push_back(ranges[l]);
    }
    return beam;
}

const std::vector<double> kUniform11(11, 1.0 / 11.0);

}  // namespace

TEST_CASE("bin count derives from the occupancy resolution") {
    CHECK(bin_count(0.1) == 11);
    CHECK(bin_count(1.0) == 2);
    CHECK(bin_count(0.5) == 3);
    CHECK_THROWS_AS(bin_count(0.3), std::invalid_argument);
    CHECK_THROWS_AS(bin_count(0.0), std::invalid_argument);
    CHECK_THROWS_AS(bin_count(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(bin_count(2.0), std::invalid_argument);
}

TEST_CASE("expected occupancy of reference distributions") {
    CHECK(expected_occupancy(kUniform11, 0.1) == doctest::Approx(0.5).epsilon(1e-12));
    std::vector<double> point(11, 0.0);
    point[10] = 1.0;
    CHECK(expected_occupancy(point, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> split(11, 0.0);
    split[0] = 0.5;
    split[10] = 0.5;
    CHECK(expected_occupancy(split, 0.1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("belief variance of reference distributions") {
    std::vector<double> point(11, 0.0);
    point[3] = 1.0;
    CHECK(belief_variance(point, 0.1) == doctest::Approx(0.0));
    // discrete uniform over K = 11 bins: (K^2 - 1) lambda^2 / 12 = 0.1
    CHECK(belief_variance(kUniform11, 0.1) == doctest::Approx(0.1).epsilon(1e-12));
    std::vector<double> split(11, 0.0);
    split[0] = 0.5;
    split[10] = 0.5;
    CHECK(belief_variance(split, 0.1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("uniform belief map caches") {
    GridGeometry geom{120, 70, 0.2, 0.0, 0.0};
    BeliefMap belief = BeliefMap::uniform(geom, 0.1);
    CHECK(belief.bins == 11);
    CHECK(belief.pmf.size() == geom.cell_count() * 11);
    for (std::size_t i : {std::size_t(0), std::size_t(4200), geom.cell_count() - 1}) {
        CHECK(belief.expected(i) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(belief.hbin[i] == doctest::Approx(std::log2(11.0)).epsilon(1e-12));
    }
}

TEST_CASE("chain update matches the joint-enumeration oracle") {
    SensorConfig cfg;
    cfg.range_noise_sigma = 0.12;
    CrmConfig crm;
    const double res = 0.2;
    std::vector<std::vector<double>> priors = {
        {0.2, 0.2, 0.15, 0.1, 0.1, 0.05, 0.05, 0.05, 0.05, 0.03, 0.02},
        kUniform11,
        {0.02, 0.03, 0.05, 0.05, 0.05, 0.05, 0.1, 0.1, 0.15, 0.2, 0.2},
    };
    std::vector<double> ranges = {0.1, 0.3, 0.5};

    BeliefMap belief = chain_belief(priors, res);
    ChainOracle oracle{priors, ranges, 0.1};
    const double sigma = effective_range_sigma(cfg, res, crm);
    CHECK(sigma == doctest::Approx(0.12));

    SUBCASE("finite return") {
        Beam beam = chain_beam(ranges, 0.32, false);
        UpdateStats stats = update_cell_chain(belief, beam, cfg, crm);
        CHECK(stats.updated_cells == 3);
        CHECK(stats.degenerate_fallbacks == 0);
        oracle.update(0.32, false, sigma, cfg.max_range, crm.no_return_weight);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(belief.expected(k) == doctest::Approx(oracle.mhat(k)).epsilon(1e-12));
            auto pmf = belief.cell(k);
            for (int b = 0; b < 11; ++b)
                CHECK(pmf[b] == doctest::Approx(oracle.pmf[k][b]).epsilon(1e-11));
        }
    }

    SUBCASE("max-range return") {
        Beam beam = chain_beam(ranges, cfg.max_range, true);
        update_cell_chain(belief, beam, cfg, crm);
        oracle.update(cfg.max_range, true, sigma, cfg.max_range, crm.no_return_weight);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(belief.expected(k) == doctest::Approx(oracle.mhat(k)).epsilon(1e-12));
    }

    SUBCASE("cells beyond the return stay untouched") {
        Beam beam = chain_beam(ranges, 0.1, false);  // return at the first cell
        update_cell_chain(belief, beam, cfg, crm);
        // third cell sits past z + one cell and must keep its prior
        auto pmf = belief.cell(2);
        for (int b = 0; b < 11; ++b) CHECK(pmf[b] == doctest::Approx(priors[2][b]));
    }
}

TEST_CASE("repeated exact returns converge the hit cell") {
    SensorConfig cfg;
    cfg.range_noise_sigma = 0.0;  // noise-free: the resolution floor applies
    CrmConfig crm;
    const double res = 0.2;
    const double sigma = effective_range_sigma(cfg, res, crm);
    CHECK(sigma == doctest::Approx(0.05));

    SUBCASE("single-cell chain has a closed-form limit") {
        // with one cell and a finite return the likelihood is exactly b*v, so
        // u updates leave the posterior proportional to v^u
        BeliefMap belief = chain_belief({kUniform11}, res);
        Beam beam = chain_beam({0.1}, 0.1, false);
        for (int u = 0; u < 10; ++u) update_cell_chain(belief, beam, cfg, crm);
        const double expect = 142364319625.0 / 149143419250.0;  // sum b^11 / (10 sum b^10)
        CHECK(belief.expected(0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(belief.expected(0) >= 0.95);
    }

    SUBCASE("three-cell chain tracks the enumeration oracle over ten rounds") {
        std::vector<std::vector<double>> priors = {kUniform11, kUniform11, kUniform11};
        std::vector<double> ranges = {0.1, 0.3, 0.5};
        BeliefMap belief = chain_belief(priors, res);
        ChainOracle oracle{priors, ranges, 0.1};
        Beam beam = chain_beam(ranges, 0.3, false);
        for (int u = 0; u < 10; ++u) {
            update_cell_chain(belief, beam, cfg, crm);
            oracle.update(0.3, false, sigma, cfg.max_range, crm.no_return_weight);
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(belief.expected(k) == doctest::Approx(oracle.mhat(k)).epsilon(1e-9));
        }
        CHECK(belief.expected(1) >= 0.95);
    }

    SUBCASE("repeated no-return beams drive every cell free") {
        BeliefMap belief = chain_belief({kUniform11, kUniform11, kUniform11}, res);
        std::vector<double> ranges = {0.1, 0.3, 0.5};
        Beam beam = chain_beam(ranges, cfg.max_range, true);
        for (int u = 0; u < 10; ++u) update_cell_chain(belief, beam, cfg, crm);
        // the mirror image of the single-cell hit limit: posterior ~ (1-v)^10
        const double expect = 1.0 - 142364319625.0 / 149143419250.0;
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(belief.expected(k) <= 0.05);
            CHECK(belief.expected(k) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("updates keep every pmf normalized") {
    GroundTruthMap world = generate_structured(12.0, 8.0, 0.2, 2);
    BeliefMap belief = BeliefMap::uniform(world.geom, 0.1);
    SensorConfig cfg;
    CrmConfig crm;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(0.4, 11.6);
    std::uniform_real_distribution<double> uy(0.4, 7.6);
    std::uniform_real_distribution<double> uh(-M_PI, M_PI);
    int scans = 0;
    while (scans < 30) {
        Pose pose{ux(rng), uy(rng), uh(rng)};
        if (!is_free(world, pose)) continue;
        Scan s = simulate_scan(world, pose, cfg, rng);
        UpdateStats stats = update_with_scan(belief, s, cfg, crm);
        CHECK(stats.updated_cells > 0);
        ++scans;
    }
    for (std::size_t i = 0; i < belief.geom.cell_count(); ++i) {
        auto pmf = belief.cell(i);
        double total = 0.0;
        for (double p : pmf) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
        CHECK(belief.expected(i) == doctest::Approx(expected_occupancy(pmf, 0.1)).epsilon(1e-12));
    }
}

TEST_CASE("map entropy counts one bit per unknown cell") {
    GridGeometry geom{120, 70, 0.2, 0.0, 0.0};
    BeliefMap belief = BeliefMap::uniform(geom, 0.1);
    CHECK(map_entropy(belief) == doctest::Approx(8400.0).epsilon(1e-12));

    auto pmf = belief.cell(0);
    std::fill(pmf.begin(), pmf.end(), 0.0);
    pmf[10] = 1.0;  // converged cell contributes zero entropy
    belief.commit(0);
    CHECK(map_entropy(belief) == doctest::Approx(8399.0).epsilon(1e-12));

    pmf = belief.cell(1);
    std::fill(pmf.begin(), pmf.end(), 0.0);
    pmf[0] = 0.75;
    pmf[10] = 0.25;  // mhat 0.25 contributes its binary entropy
    belief.commit(1);
    CHECK(map_entropy(belief) ==
          doctest::Approx(8398.0 + binary_entropy_bits(0.25)).epsilon(1e-12));
    CHECK(binary_entropy_bits(0.25) == doctest::Approx(0.8113).epsilon(1e-4));
}

TEST_CASE("coverage counts cells pushed away from unknown") {
    GridGeometry geom{10, 10, 0.2, 0.0, 0.0};
    BeliefMap belief = BeliefMap::uniform(geom, 0.1);
    CHECK(coverage(belief, 0.05) == doctest::Approx(0.0));
    for (std::size_t i = 0; i < 25; ++i) {
        auto pmf = belief.cell(i);
        std::fill(pmf.begin(), pmf.end(), 0.0);
        pmf[0] = 0.1;
        pmf[10] = 0.9;  // mhat 0.9
        belief.commit(i);
    }
    CHECK(coverage(belief, 0.05) == doctest::Approx(0.25));
    for (std::size_t i = 25; i < geom.cell_count(); ++i) {
        auto pmf = belief.cell(i);
        std::fill(pmf.begin(), pmf.end(), 0.0);
        pmf[0] = 1.0;
        belief.commit(i);
    }
    CHECK(coverage(belief, 0.05) == doctest::Approx(1.0));
}

TEST_CASE("belief export writes loadable mean and variance grids") {
    GridGeometry geom{8, 6, 0.25, 0.0, 0.0};
    BeliefMap belief = BeliefMap::uniform(geom, 0.1);
    auto dir = std::filesystem::temp_directory_path() / "infoscout_crm_tests";
    std::filesystem::create_directories(dir);
    std::string mean_path = (dir / "mean.ismap").string();
    std::string var_path = (dir / "var.isvar").string();
    save_belief(belief, mean_path, var_path);
    GroundTruthMap mean = load_map(mean_path);
    CHECK(mean.geom.width_cells == 8);
    CHECK(mean.geom.height_cells == 6);
    std::ifstream var(var_path);
    std::string magic;
    var >> magic;
    CHECK(magic == "ISVARF1");
}
