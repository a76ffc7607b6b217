#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "infoscout/explore.hpp"

using namespace infoscout;

namespace {

struct Fixture {
    GroundTruthMap truth = generate_structured(12.0, 8.0, 0.2, 2);
    SensorConfig sensor;
    CrmConfig crm;
    InfoEvalConfig info;
    KernelConfig kernel;
    BKIConfig bki;
    OptimizeConfig opt;
    PlanConfig plan;
    ExplorationConfig cfg;

    Fixture() {
        cfg.n_loop = 12;
        cfg.n_points = 10;
        cfg.n_headings = 4;
        cfg.action_radius = 3.0;
        cfg.seed = 5;
    }

    ExplorationResult run(const BeliefMap* seed_belief = nullptr) const {
        return run_exploration(truth, cfg, sensor, crm, info, kernel, bki, opt, plan,
                               seed_belief);
    }
};

BeliefMap converged_from_truth(const GroundTruthMap& truth) {
    BeliefMap belief = BeliefMap::uniform(truth.geom, 0.1);
    for (std::size_t i = 0; i < truth.geom.cell_count(); ++i) {
        auto pmf = belief.cell(i);
        std::fill(pmf.begin(), pmf.end(), 0.0);
        pmf[truth.cells[i] == Cell::Occupied ? 10 : 0] = 1.0;
        belief.commit(i);
    }
    return belief;
}

bool same_semantics(const StepRecord& a, const StepRecord& b) {
    return a.step == b.step && a.chosen.x == b.chosen.x && a.chosen.y == b.chosen.y &&
           a.chosen.heading == b.chosen.heading && a.crmi_bits == b.crmi_bits &&
           a.entropy_bits == b.entropy_bits && a.coverage == b.coverage &&
           a.distance_m == b.distance_m && a.backtracked == b.backtracked &&
           a.explicit_evals == b.explicit_evals;
}

}  // namespace

TEST_CASE("exhaustive engine explores a small maze") {
    Fixture fx;
    ExplorationResult out = fx.run();
    REQUIRE(!out.records.empty());
    CHECK(out.records.size() <= 12);

    double prev_distance = 0.0;
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        const StepRecord& rec = out.records[i];
        CHECK(rec.step == static_cast<int>(i) + 1);
        CHECK(rec.crmi_bits >= 0.0);
        CHECK(rec.explicit_evals <= 40);
        CHECK(rec.eval_time_s >= 0.0);
        CHECK(rec.eval_time_s <= rec.step_time_s + 1e-6);
        CHECK(rec.coverage >= 0.0);
        CHECK(rec.coverage <= 1.0);
        CHECK(rec.distance_m >= prev_distance);
        prev_distance = rec.distance_m;
        CHECK(fx.truth.geom.contains(rec.chosen.x, rec.chosen.y));
    }
    CHECK(out.records.back().coverage >= out.records.front().coverage);
    CHECK(out.records.back().coverage > 0.15);
    CHECK(out.records.back().entropy_bits < out.records.front().entropy_bits);

    // the belief the run returns is still a valid distribution
    for (std::size_t i = 0; i < out.belief.geom.cell_count(); i += 97) {
        auto pmf = out.belief.cell(i);
        double total = 0.0;
        for (double p : pmf) total += p;
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
}

TEST_CASE("runs are reproducible per seed") {
    Fixture fx;
    ExplorationResult a = fx.run();
    ExplorationResult b = fx.run();
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i)
        CHECK(same_semantics(a.records[i], b.records[i]));
    CHECK(a.belief.pmf == b.belief.pmf);

    fx.cfg.seed = 6;
    ExplorationResult c = fx.run();
    bool identical = a.records.size() == c.records.size();
    if (identical) {
        for (std::size_t i = 0; i < a.records.size() && identical; ++i)
            identical = same_semantics(a.records[i], c.records[i]);
    }
    CHECK_FALSE(identical);
}

TEST_CASE("surrogate engines stay within their evaluation budget") {
    for (Engine engine : {Engine::gpbo, Engine::bkio}) {
        Fixture fx;
        fx.cfg.engine = engine;
        fx.cfg.n_loop = 4;
        fx.cfg.n_explicit = 16;
        fx.opt.n_epoch = 8;
        ExplorationResult out = fx.run();
        REQUIRE(!out.records.empty());
        for (const StepRecord& rec : out.records) {
            if (rec.backtracked && rec.explicit_evals == 0) continue;
            CHECK(rec.explicit_evals >= 16);
            CHECK(rec.explicit_evals <= 16 + 8);
        }
    }
}

TEST_CASE("surrogate engine falls back to the sweep when everything is explicit") {
    Fixture fx;
    fx.cfg.engine = Engine::gpbo;
    fx.cfg.n_loop = 2;
    fx.cfg.n_explicit = 80;  // more than the 40 candidates per step
    ExplorationResult out = fx.run();
    REQUIRE(!out.records.empty());
    for (const StepRecord& rec : out.records)
        if (!rec.backtracked) CHECK(rec.explicit_evals == 40);
}

TEST_CASE("a converged belief ends exploration immediately") {
    Fixture fx;
    BeliefMap seeded = converged_from_truth(fx.truth);
    ExplorationResult out = fx.run(&seeded);
    REQUIRE(out.records.size() == 1);
    CHECK(out.records[0].backtracked);
    CHECK(out.records[0].crmi_bits == 0.0);
    CHECK(out.records[0].coverage == 1.0);
    CHECK(out.records[0].entropy_bits == 0.0);
}

TEST_CASE("exploration input validation") {
    Fixture fx;
    fx.cfg.start_x = 0.1;
    fx.cfg.start_y = 0.1;  // border cell is occupied
    CHECK_THROWS_AS(fx.run(), std::invalid_argument);

    Fixture loops;
    loops.cfg.n_loop = 0;
    CHECK_THROWS_AS(loops.run(), std::invalid_argument);

    Fixture mismatch;
    BeliefMap wrong = BeliefMap::uniform(GridGeometry{10, 10, 0.2, 0.0, 0.0}, 0.1);
    CHECK_THROWS_AS(mismatch.run(&wrong), std::invalid_argument);
}
