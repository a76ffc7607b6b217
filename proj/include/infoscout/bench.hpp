#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infoscout/explore.hpp"

namespace infoscout {

struct WorldGenConfig {
    enum class Kind { structured, unstructured, file };
    Kind kind = Kind::structured;
    double width_m = 24.0;
    double height_m = 14.0;
    double resolution = 0.2;
    std::uint32_t seed = 1;
    int n_obstacles = 12;  // unstructured only
    std::string map_file;  // kind == file only
};

struct BenchConfig {
    int trials = 5;
    std::vector<Engine> engines = {Engine::ng, Engine::gpbo, Engine::bkio};
    std::string output_dir = "out";
    unsigned base_seed = 1;  // trial t runs with seed base_seed + t, shared across engines
    bool serial = false;     // serial keeps wall-clock timings comparable
    bool check = false;
    int workers = 0;  // 0 picks hardware_concurrency
};

// Everything one benchmark run needs. Defaults reproduce the desk-scale
// setup; load_run_config overrides fields from an INI file.
struct RunConfig {
    WorldGenConfig world;
    SensorConfig sensor;
    CrmConfig crm;
    InfoEvalConfig info;
    KernelConfig kernel;
    BKIConfig bki;
    OptimizeConfig optimize;
    PlanConfig plan;
    ExplorationConfig explore;
    BenchConfig bench;
};

RunConfig default_run_config();

// INI-style config: [section] headers, key = value lines, # or ; comments.
// Unknown sections or keys and malformed values throw std::runtime_error
// with a "path:line: message" prefix.
RunConfig load_run_config(const std::string& path);

const char* engine_name(Engine e);
Engine parse_engine(const std::string& name);               // throws std::invalid_argument
std::vector<Engine> parse_engine_list(const std::string& csv);
const char* world_kind_name(WorldGenConfig::Kind kind);
WorldGenConfig::Kind parse_world_kind(const std::string& name);

GroundTruthMap make_world(const WorldGenConfig& cfg);

struct TrialOutcome {
    Engine engine = Engine::ng;
    int trial = 0;
    bool ok = false;
    std::string error;
    std::vector<StepRecord> records;
};

// Per-step aggregate across the ok trials of one engine. n counts the trials
// still running at that step; stds are population stds; time_mean accumulates
// the per-step mean step time.
struct StepAggregate {
    int step = 0;
    long long n = 0;
    double entropy_mean = 0.0, entropy_std = 0.0;
    double coverage_mean = 0.0, coverage_std = 0.0;
    double eval_mean = 0.0, eval_std = 0.0;
    double steptime_mean = 0.0, steptime_std = 0.0;
    double time_mean = 0.0;
    double distance_mean = 0.0;
};

struct EngineSummary {
    Engine engine = Engine::ng;
    int trials_ok = 0;
    int trials_total = 0;
    double eval_mean = 0.0, eval_std = 0.0;  // pooled over every step of every ok trial
    double step_mean = 0.0, step_std = 0.0;
    double final_entropy_mean = 0.0;
    double final_coverage_mean = 0.0;
    double final_distance_mean = 0.0;
    double mean_steps = 0.0;
    std::vector<StepAggregate> per_step;
};

struct BenchResult {
    std::vector<TrialOutcome> trials;
    std::vector<EngineSummary> summaries;  // aggregated from the written raw CSVs
    bool checks_ok = true;                 // true when checks are disabled
    std::vector<std::string> check_lines;
    std::string output_dir;
};

// Raw per-step CSV, one row per decision step, doubles at %.17g so values
// round-trip exactly.
void write_records_csv(const std::string& path, const std::vector<StepRecord>& records);
std::vector<StepRecord> load_records_csv(const std::string& path);

EngineSummary summarize_engine(Engine engine, const std::vector<std::vector<StepRecord>>& ok_trials,
                               int trials_total);

// Runs trials x engines on one shared world, writes out/raw/<engine>_t<k>.csv,
// agg_<engine>.csv, four plot tables, map.ismap and summary.txt under
// cfg.bench.output_dir. Trial failures are recorded and do not abort the
// sweep. With cfg.bench.check set, cross-engine assertions (eval-time
// ordering and ratios, map-quality parity) decide checks_ok.
BenchResult run_benchmark(const RunConfig& cfg);

struct AblationRow {
    int n_epoch = 0;
    Engine engine = Engine::ng;
    double eval_mean = 0.0;
    double step_mean = 0.0;
    double final_entropy = 0.0;
    double final_coverage = 0.0;
    double distance_m = 0.0;
    int trials_ok = 0;
    int trials_total = 0;
};

// Re-runs the benchmark for each optimizer epoch count (surrogate engines
// only) under <output_dir>/ablate/epoch_<E>/ and writes ablate/ablation.csv
// plus a text table.
std::vector<AblationRow> ablate_epochs(const RunConfig& base, const std::vector<int>& epochs);

}  // namespace infoscout
