#include "infoscout/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace infoscout {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double pop_std_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
}

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void cfg_fail(const std::string& path, int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) cfg_fail(path, line, "trailing characters in number '" + v + "'");
        return d;
    } catch (const std::logic_error&) {
        cfg_fail(path, line, "expected a number, got '" + v + "'");
    }
}

long parse_long(const std::string& v, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) cfg_fail(path, line, "trailing characters in integer '" + v + "'");
        return d;
    } catch (const std::logic_error&) {
        cfg_fail(path, line, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& path, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    cfg_fail(path, line, "expected true/false, got '" + v + "'");
}

void assign_key(RunConfig& cfg, const std::string& section, const std::string& key,
                const std::string& value, const std::string& path, int line) {
    auto num = [&] { return parse_double(value, path, line); };
    auto integer = [&] { return parse_long(value, path, line); };
    auto flag = [&] { return parse_bool(value, path, line); };

    if (section == "world") {
        if (key == "kind") {
            try {
                cfg.world.kind = parse_world_kind(value);
            } catch (const std::invalid_argument& e) {
                cfg_fail(path, line, e.what());
            }
        } else if (key == "width") {
            cfg.world.width_m = num();
        } else if (key == "height") {
            cfg.world.height_m = num();
        } else if (key == "resolution") {
            cfg.world.resolution = num();
        } else if (key == "seed") {
            cfg.world.seed = static_cast<std::uint32_t>(integer());
        } else if (key == "obstacles") {
            cfg.world.n_obstacles = static_cast<int>(integer());
        } else if (key == "file") {
            cfg.world.map_file = value;
        } else {
            cfg_fail(path, line, "unknown key '" + key + "' in [world]");
        }
    } else if (section == "sensor") {
        if (key == "fov") cfg.sensor.fov = num();
        else if (key == "angular_resolution") cfg.sensor.angular_resolution = num();
        else if (key == "max_range") cfg.sensor.max_range = num();
        else if (key == "range_noise_sigma") cfg.sensor.range_noise_sigma = num();
        else if (key == "cell_step") cfg.sensor.cell_step = num();
        else cfg_fail(path, line, "unknown key '" + key + "' in [sensor]");
    } else if (section == "crm") {
        if (key == "no_return_weight") cfg.crm.no_return_weight = num();
        else if (key == "sigma_floor_frac") cfg.crm.sigma_floor_frac = num();
        else cfg_fail(path, line, "unknown key '" + key + "' in [crm]");
    } else if (section == "info") {
        if (key == "lambda_z") cfg.info.lambda_z = num();
        else if (key == "lambda_m") cfg.info.lambda_m = num();
        else if (key == "occupied_threshold") cfg.info.occupied_threshold = num();
        else cfg_fail(path, line, "unknown key '" + key + "' in [info]");
    } else if (section == "kernel") {
        if (key == "length_scale") cfg.kernel.length_scale = num();
        else if (key == "truncation_radius") cfg.kernel.truncation_radius = num();
        else if (key == "heading_weight") cfg.kernel.heading_weight = num();
        else if (key == "gp_amplitude") cfg.kernel.gp_amplitude = num();
        else cfg_fail(path, line, "unknown key '" + key + "' in [kernel]");
    } else if (section == "bki") {
        if (key == "zeta") cfg.bki.zeta = num();
        else if (key == "theta0") cfg.bki.theta0 = num();
        else if (key == "sigma_theta") cfg.bki.sigma_theta = num();
        else cfg_fail(path, line, "unknown key '" + key + "' in [bki]");
    } else if (section == "ucb") {
        if (key == "alpha") cfg.optimize.ucb.alpha = num();
        else if (key == "delta") cfg.optimize.ucb.delta = num();
        else if (key == "schedule") {
            if (value == "constant") cfg.optimize.ucb.schedule = UCBConfig::Schedule::constant;
            else if (value == "lemma1") cfg.optimize.ucb.schedule = UCBConfig::Schedule::lemma1;
            else cfg_fail(path, line, "unknown schedule '" + value + "' (constant or lemma1)");
        } else {
            cfg_fail(path, line, "unknown key '" + key + "' in [ucb]");
        }
    } else if (section == "optimize") {
        if (key == "n_epoch") cfg.optimize.n_epoch = static_cast<int>(integer());
        else if (key == "incumbent_compare") cfg.optimize.incumbent_compare = flag();
        else if (key == "cache_kernel") cfg.optimize.cache_kernel = flag();
        else if (key == "random_ties") cfg.optimize.random_ties = flag();
        else cfg_fail(path, line, "unknown key '" + key + "' in [optimize]");
    } else if (section == "plan") {
        if (key == "free_threshold") cfg.plan.free_threshold = num();
        else if (key == "occupied_threshold") cfg.plan.occupied_threshold = num();
        else if (key == "unknown_tail_frac") cfg.plan.unknown_tail_frac = num();
        else if (key == "reject_budget_per_point")
            cfg.plan.reject_budget_per_point = static_cast<int>(integer());
        else cfg_fail(path, line, "unknown key '" + key + "' in [plan]");
    } else if (section == "explore") {
        if (key == "info_threshold") cfg.explore.info_threshold = num();
        else if (key == "n_loop") cfg.explore.n_loop = static_cast<int>(integer());
        else if (key == "n_points") cfg.explore.n_points = static_cast<int>(integer());
        else if (key == "n_headings") cfg.explore.n_headings = static_cast<int>(integer());
        else if (key == "n_explicit") cfg.explore.n_explicit = static_cast<int>(integer());
        else if (key == "action_radius") cfg.explore.action_radius = num();
        else if (key == "coverage_epsilon") cfg.explore.coverage_epsilon = num();
        else if (key == "start_x") cfg.explore.start_x = num();
        else if (key == "start_y") cfg.explore.start_y = num();
        else if (key == "start_heading") cfg.explore.start_heading = num();
        else cfg_fail(path, line, "unknown key '" + key + "' in [explore]");
    } else if (section == "bench") {
        if (key == "trials") cfg.bench.trials = static_cast<int>(integer());
        else if (key == "engines") {
            try {
                cfg.bench.engines = parse_engine_list(value);
            } catch (const std::invalid_argument& e) {
                cfg_fail(path, line, e.what());
            }
        } else if (key == "output_dir") {
            cfg.bench.output_dir = value;
        } else if (key == "seed") {
            cfg.bench.base_seed = static_cast<unsigned>(integer());
        } else if (key == "serial") {
            cfg.bench.serial = flag();
        } else if (key == "check") {
            cfg.bench.check = flag();
        } else if (key == "workers") {
            cfg.bench.workers = static_cast<int>(integer());
        } else {
            cfg_fail(path, line, "unknown key '" + key + "' in [bench]");
        }
    } else {
        cfg_fail(path, line, "unknown section [" + section + "]");
    }
}

std::string raw_csv_path(const std::filesystem::path& out, Engine e, int trial) {
    return (out / "raw" / (std::string(engine_name(e)) + "_t" + std::to_string(trial) + ".csv"))
        .string();
}

constexpr const char* kRawHeader =
    "step,chosen_x,chosen_y,chosen_heading,crmi_bits,eval_time_s,step_time_s,entropy_bits,"
    "coverage,distance_m,backtracked,explicit_evals";

}  // namespace

RunConfig default_run_config() { return RunConfig{}; }

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::ng: return "ng";
        case Engine::gpbo: return "gpbo";
        case Engine::bkio: return "bkio";
    }
    return "?";
}

Engine parse_engine(const std::string& name) {
    if (name == "ng") return Engine::ng;
    if (name == "gpbo") return Engine::gpbo;
    if (name == "bkio") return Engine::bkio;
    throw std::invalid_argument("unknown engine '" + name + "' (ng, gpbo or bkio)");
}

std::vector<Engine> parse_engine_list(const std::string& csv) {
    std::vector<Engine> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        const Engine e = parse_engine(trim(item));
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    }
    if (out.empty()) throw std::invalid_argument("empty engine list");
    return out;
}

const char* world_kind_name(WorldGenConfig::Kind kind) {
    switch (kind) {
        case WorldGenConfig::Kind::structured: return "structured";
        case WorldGenConfig::Kind::unstructured: return "unstructured";
        case WorldGenConfig::Kind::file: return "file";
    }
    return "?";
}

WorldGenConfig::Kind parse_world_kind(const std::string& name) {
    if (name == "structured") return WorldGenConfig::Kind::structured;
    if (name == "unstructured") return WorldGenConfig::Kind::unstructured;
    if (name == "file") return WorldGenConfig::Kind::file;
    throw std::invalid_argument("unknown world kind '" + name +
                                "' (structured, unstructured or file)");
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config file");
    RunConfig cfg;
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') cfg_fail(path, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) cfg_fail(path, line, "empty section name");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) cfg_fail(path, line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) cfg_fail(path, line, "empty key");
        if (section.empty()) cfg_fail(path, line, "key before any [section]");
        assign_key(cfg, section, key, value, path, line);
    }
    return cfg;
}

GroundTruthMap make_world(const WorldGenConfig& cfg) {
    switch (cfg.kind) {
        case WorldGenConfig::Kind::structured:
            return generate_structured(cfg.width_m, cfg.height_m, cfg.resolution, cfg.seed);
        case WorldGenConfig::Kind::unstructured:
            return generate_unstructured(cfg.width_m, cfg.height_m, cfg.resolution,
                                         cfg.n_obstacles, cfg.seed);
        case WorldGenConfig::Kind::file:
            if (cfg.map_file.empty())
                throw std::invalid_argument("make_world: kind is file but map_file is empty");
            return load_map(cfg.map_file);
    }
    throw std::invalid_argument("make_world: bad kind");
}

void write_records_csv(const std::string& path, const std::vector<StepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << kRawHeader << "\n";
    for (const StepRecord& r : records) {
        out << r.step << ',' << fmt17(r.chosen.x) << ',' << fmt17(r.chosen.y) << ','
            << fmt17(r.chosen.heading) << ',' << fmt17(r.crmi_bits) << ','
            << fmt17(r.eval_time_s) << ',' << fmt17(r.step_time_s) << ','
            << fmt17(r.entropy_bits) << ',' << fmt17(r.coverage) << ','
            << fmt17(r.distance_m) << ',' << (r.backtracked ? 1 : 0) << ','
            << r.explicit_evals << "\n";
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<StepRecord> load_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (trim(line) != kRawHeader) throw std::runtime_error(path + ": unexpected header");
    std::vector<StepRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::string item;
        std::istringstream row(line);
        while (std::getline(row, item, ',')) f.push_back(item);
        if (f.size() != 12)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 12 fields");
        StepRecord r;
        try {
            r.step = std::stoi(f[0]);
            r.chosen.x = std::stod(f[1]);
            r.chosen.y = std::stod(f[2]);
            r.chosen.heading = std::stod(f[3]);
            r.crmi_bits = std::stod(f[4]);
            r.eval_time_s = std::stod(f[5]);
            r.step_time_s = std::stod(f[6]);
            r.entropy_bits = std::stod(f[7]);
            r.coverage = std::stod(f[8]);
            r.distance_m = std::stod(f[9]);
            r.backtracked = std::stoi(f[10]) != 0;
            r.explicit_evals = std::stoll(f[11]);
        } catch (const std::logic_error&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad field");
        }
        out.push_back(r);
    }
    return out;
}

EngineSummary summarize_engine(Engine engine, const std::vector<std::vector<StepRecord>>& ok_trials,
                               int trials_total) {
    EngineSummary s;
    s.engine = engine;
    s.trials_total = trials_total;
    s.trials_ok = static_cast<int>(ok_trials.size());
    if (ok_trials.empty()) return s;

    std::size_t max_steps = 0;
    for (const auto& t : ok_trials) max_steps = std::max(max_steps, t.size());

    double time_running = 0.0;
    for (std::size_t k = 0; k < max_steps; ++k) {
        std::vector<double> ent, cov, ev, st, dist;
        for (const auto& t : ok_trials) {
            if (k >= t.size()) continue;
            ent.push_back(t[k].entropy_bits);
            cov.push_back(t[k].coverage);
            ev.push_back(t[k].eval_time_s);
            st.push_back(t[k].step_time_s);
            dist.push_back(t[k].distance_m);
        }
        StepAggregate a;
        a.step = static_cast<int>(k) + 1;
        a.n = static_cast<long long>(ent.size());
        a.entropy_mean = mean_of(ent);
        a.entropy_std = pop_std_of(ent, a.entropy_mean);
        a.coverage_mean = mean_of(cov);
        a.coverage_std = pop_std_of(cov, a.coverage_mean);
        a.eval_mean = mean_of(ev);
        a.eval_std = pop_std_of(ev, a.eval_mean);
        a.steptime_mean = mean_of(st);
        a.steptime_std = pop_std_of(st, a.steptime_mean);
        time_running += a.steptime_mean;
        a.time_mean = time_running;
        a.distance_mean = mean_of(dist);
        s.per_step.push_back(a);
    }

    std::vector<double> all_ev, all_st, fin_ent, fin_cov, fin_dist, steps;
    for (const auto& t : ok_trials) {
        for (const StepRecord& r : t) {
            all_ev.push_back(r.eval_time_s);
            all_st.push_back(r.step_time_s);
        }
        if (!t.empty()) {
            fin_ent.push_back(t.back().entropy_bits);
            fin_cov.push_back(t.back().coverage);
            fin_dist.push_back(t.back().distance_m);
        }
        steps.push_back(static_cast<double>(t.size()));
    }
    s.eval_mean = mean_of(all_ev);
    s.eval_std = pop_std_of(all_ev, s.eval_mean);
    s.step_mean = mean_of(all_st);
    s.step_std = pop_std_of(all_st, s.step_mean);
    s.final_entropy_mean = mean_of(fin_ent);
    s.final_coverage_mean = mean_of(fin_cov);
    s.final_distance_mean = mean_of(fin_dist);
    s.mean_steps = mean_of(steps);
    return s;
}

namespace {

void write_agg_csv(const std::filesystem::path& out, const EngineSummary& s) {
    const std::string path =
        (out / (std::string("agg_") + engine_name(s.engine) + ".csv")).string();
    std::ofstream f(path);
    if (!f) throw std::runtime_error(path + ": cannot open for writing");
    f << "step,n,entropy_mean,entropy_std,coverage_mean,coverage_std,eval_mean,eval_std,"
         "steptime_mean,steptime_std,time_mean,distance_mean\n";
    for (const StepAggregate& a : s.per_step) {
        f << a.step << ',' << a.n << ',' << fmt17(a.entropy_mean) << ',' << fmt17(a.entropy_std)
          << ',' << fmt17(a.coverage_mean) << ',' << fmt17(a.coverage_std) << ','
          << fmt17(a.eval_mean) << ',' << fmt17(a.eval_std) << ',' << fmt17(a.steptime_mean)
          << ',' << fmt17(a.steptime_std) << ',' << fmt17(a.time_mean) << ','
          << fmt17(a.distance_mean) << "\n";
    }
}

// One row per step, blocks of columns per engine, nan once an engine's runs
// have all ended.
void write_plot_tables(const std::filesystem::path& out, const std::vector<EngineSummary>& sums) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t max_steps = 0;
    for (const auto& s : sums) max_steps = std::max(max_steps, s.per_step.size());

    struct Spec {
        const char* file;
        std::vector<const char*> suffixes;
        std::vector<double (*)(const StepAggregate&)> getters;
    };
    const std::vector<Spec> specs = {
        {"plot_entropy_step.csv",
         {"_mean", "_std"},
         {[](const StepAggregate& a) { return a.entropy_mean; },
          [](const StepAggregate& a) { return a.entropy_std; }}},
        {"plot_coverage_step.csv",
         {"_mean", "_std"},
         {[](const StepAggregate& a) { return a.coverage_mean; },
          [](const StepAggregate& a) { return a.coverage_std; }}},
        {"plot_entropy_time.csv",
         {"_time", "_mean", "_std"},
         {[](const StepAggregate& a) { return a.time_mean; },
          [](const StepAggregate& a) { return a.entropy_mean; },
          [](const StepAggregate& a) { return a.entropy_std; }}},
        {"plot_coverage_distance.csv",
         {"_distance", "_mean", "_std"},
         {[](const StepAggregate& a) { return a.distance_mean; },
          [](const StepAggregate& a) { return a.coverage_mean; },
          [](const StepAggregate& a) { return a.coverage_std; }}},
    };

    for (const Spec& spec : specs) {
        const std::string path = (out / spec.file).string();
        std::ofstream f(path);
        if (!f) throw std::runtime_error(path + ": cannot open for writing");
        f << "step";
        for (const auto& s : sums)
            for (const char* sfx : spec.suffixes) f << ',' << engine_name(s.engine) << sfx;
        f << "\n";
        for (std::size_t k = 0; k < max_steps; ++k) {
            f << (k + 1);
            for (const auto& s : sums) {
                for (std::size_t c = 0; c < spec.getters.size(); ++c) {
                    const double v = k < s.per_step.size() ? spec.getters[c](s.per_step[k]) : nan;
                    f << ',' << fmt17(v);
                }
            }
            f << "\n";
        }
    }
}

const EngineSummary* find_summary(const std::vector<EngineSummary>& sums, Engine e) {
    for (const auto& s : sums)
        if (s.engine == e) return &s;
    return nullptr;
}

}  // namespace

BenchResult run_benchmark(const RunConfig& cfg) {
    if (cfg.bench.trials < 1) throw std::invalid_argument("run_benchmark: trials must be positive");
    if (cfg.bench.engines.empty()) throw std::invalid_argument("run_benchmark: no engines listed");
    namespace fs = std::filesystem;
    const fs::path out(cfg.bench.output_dir);
    fs::create_directories(out / "raw");

    const GroundTruthMap world = make_world(cfg.world);
    save_map(world, (out / "map.ismap").string());

    struct Task {
        Engine engine;
        int trial;
        unsigned seed;
    };
    std::vector<Task> tasks;
    for (Engine e : cfg.bench.engines)
        for (int t = 0; t < cfg.bench.trials; ++t)
            tasks.push_back({e, t, cfg.bench.base_seed + static_cast<unsigned>(t)});

    BenchResult result;
    result.output_dir = out.string();
    result.trials.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            TrialOutcome& o = result.trials[i];
            o.engine = tasks[i].engine;
            o.trial = tasks[i].trial;
            try {
                ExplorationConfig ec = cfg.explore;
                ec.engine = tasks[i].engine;
                ec.seed = tasks[i].seed;
                ExplorationResult r = run_exploration(world, ec, cfg.sensor, cfg.crm, cfg.info,
                                                      cfg.kernel, cfg.bki, cfg.optimize, cfg.plan);
                o.records = std::move(r.records);
                o.ok = true;
            } catch (const std::exception& ex) {
                o.ok = false;
                o.error = ex.what();
            }
        }
    };
    if (cfg.bench.serial || tasks.size() == 1) {
        work();
    } else {
        const unsigned hw = std::thread::hardware_concurrency();
        std::size_t n = cfg.bench.workers > 0 ? static_cast<std::size_t>(cfg.bench.workers)
                                              : (hw ? hw : 2);
        n = std::min(n, tasks.size());
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (const TrialOutcome& o : result.trials)
        if (o.ok) write_records_csv(raw_csv_path(out, o.engine, o.trial), o.records);

    // aggregate from the files just written so the tables always match them
    for (Engine e : cfg.bench.engines) {
        std::vector<std::vector<StepRecord>> ok_trials;
        int total = 0;
        for (const TrialOutcome& o : result.trials) {
            if (o.engine != e) continue;
            ++total;
            if (o.ok) ok_trials.push_back(load_records_csv(raw_csv_path(out, e, o.trial)));
        }
        result.summaries.push_back(summarize_engine(e, ok_trials, total));
    }

    for (const EngineSummary& s : result.summaries) write_agg_csv(out, s);
    write_plot_tables(out, result.summaries);

    if (cfg.bench.check) {
        auto add = [&](bool ok, const std::string& text) {
            result.check_lines.push_back(std::string(ok ? "PASS " : "FAIL ") + text);
            result.checks_ok = result.checks_ok && ok;
        };
        char buf[256];
        for (const EngineSummary& s : result.summaries) {
            std::snprintf(buf, sizeof buf, "%s trials completed: %d/%d", engine_name(s.engine),
                          s.trials_ok, s.trials_total);
            add(s.trials_ok == s.trials_total && s.trials_ok > 0, buf);
        }
        const EngineSummary* ng = find_summary(result.summaries, Engine::ng);
        const EngineSummary* gp = find_summary(result.summaries, Engine::gpbo);
        const EngineSummary* bk = find_summary(result.summaries, Engine::bkio);
        if (bk && gp) {
            std::snprintf(buf, sizeof buf, "eval ordering bkio < gpbo: %.4f vs %.4f",
                          bk->eval_mean, gp->eval_mean);
            add(bk->eval_mean < gp->eval_mean, buf);
        }
        if (gp && ng) {
            const double ratio = gp->eval_mean / ng->eval_mean;
            std::snprintf(buf, sizeof buf, "gpbo/ng eval ratio %.4f <= 0.50", ratio);
            add(gp->eval_mean < ng->eval_mean && ratio <= 0.50, buf);
        }
        if (bk && ng) {
            const double ratio = bk->eval_mean / ng->eval_mean;
            std::snprintf(buf, sizeof buf, "bkio/ng eval ratio %.4f <= 0.30", ratio);
            add(bk->eval_mean < ng->eval_mean && ratio <= 0.30, buf);
        }
        for (const EngineSummary* s : {gp, bk}) {
            if (!s || !ng) continue;
            const double dcov = std::abs(s->final_coverage_mean - ng->final_coverage_mean);
            std::snprintf(buf, sizeof buf, "%s coverage within 0.10 of ng: |%.4f - %.4f| = %.4f",
                          engine_name(s->engine), s->final_coverage_mean,
                          ng->final_coverage_mean, dcov);
            add(dcov <= 0.10, buf);
            const double rel = ng->final_entropy_mean > 0.0
                                   ? std::abs(s->final_entropy_mean - ng->final_entropy_mean) /
                                         ng->final_entropy_mean
                                   : 0.0;
            std::snprintf(buf, sizeof buf, "%s final entropy within 15%% of ng: rel %.4f",
                          engine_name(s->engine), rel);
            add(rel <= 0.15, buf);
        }
    }

    {
        const std::string path = (out / "summary.txt").string();
        std::ofstream f(path);
        if (!f) throw std::runtime_error(path + ": cannot open for writing");
        char buf[512];
        f << "benchmark summary\n";
        std::snprintf(buf, sizeof buf, "map: %s %g x %g m at %g m/cell (seed %u)\n",
                      world_kind_name(cfg.world.kind), cfg.world.width_m, cfg.world.height_m,
                      cfg.world.resolution, cfg.world.seed);
        f << buf;
        std::snprintf(buf, sizeof buf, "trials per engine: %d, base seed %u, %s\n\n",
                      cfg.bench.trials, cfg.bench.base_seed,
                      cfg.bench.serial ? "serial" : "parallel");
        f << buf;
        std::snprintf(buf, sizeof buf, "%-6s %7s %22s %22s %14s %10s %9s %7s\n", "engine",
                      "ok", "eval_s mean+-std", "step_s mean+-std", "final_H_bits", "final_cov",
                      "dist_m", "steps");
        f << buf;
        for (const EngineSummary& s : result.summaries) {
            char ok[16];
            std::snprintf(ok, sizeof ok, "%d/%d", s.trials_ok, s.trials_total);
            char ev[32], st[32];
            std::snprintf(ev, sizeof ev, "%.4f +- %.4f", s.eval_mean, s.eval_std);
            std::snprintf(st, sizeof st, "%.4f +- %.4f", s.step_mean, s.step_std);
            std::snprintf(buf, sizeof buf, "%-6s %7s %22s %22s %14.1f %10.3f %9.1f %7.1f\n",
                          engine_name(s.engine), ok, ev, st, s.final_entropy_mean,
                          s.final_coverage_mean, s.final_distance_mean, s.mean_steps);
            f << buf;
        }
        const EngineSummary* ng = find_summary(result.summaries, Engine::ng);
        if (ng && ng->eval_mean > 0.0 && result.summaries.size() > 1) {
            f << "\neval-time ratio vs ng:";
            for (const EngineSummary& s : result.summaries) {
                if (s.engine == Engine::ng) continue;
                std::snprintf(buf, sizeof buf, " %s %.4f", engine_name(s.engine),
                              s.eval_mean / ng->eval_mean);
                f << buf;
            }
            f << "\n";
        }
        bool any_fail = false;
        for (const TrialOutcome& o : result.trials) any_fail = any_fail || !o.ok;
        if (any_fail) {
            f << "\nfailed trials:\n";
            for (const TrialOutcome& o : result.trials)
                if (!o.ok)
                    f << "  " << engine_name(o.engine) << " t" << o.trial << ": " << o.error
                      << "\n";
        }
        if (!result.check_lines.empty()) {
            f << "\nchecks:\n";
            for (const std::string& line : result.check_lines) f << "  " << line << "\n";
            f << "checks " << (result.checks_ok ? "passed" : "FAILED") << "\n";
        }
    }
    return result;
}

std::vector<AblationRow> ablate_epochs(const RunConfig& base, const std::vector<int>& epochs) {
    if (epochs.empty()) throw std::invalid_argument("ablate_epochs: no epoch counts given");
    for (int e : epochs)
        if (e < 1) throw std::invalid_argument("ablate_epochs: epoch counts must be positive");

    RunConfig cfg = base;
    cfg.bench.engines.clear();
    for (Engine e : base.bench.engines)
        if (e != Engine::ng) cfg.bench.engines.push_back(e);  // sweep only touches the optimizers
    if (cfg.bench.engines.empty())
        throw std::invalid_argument("ablate_epochs: needs gpbo or bkio in the engine list");
    cfg.bench.check = false;

    namespace fs = std::filesystem;
    const fs::path root = fs::path(base.bench.output_dir) / "ablate";
    fs::create_directories(root);

    std::vector<AblationRow> rows;
    for (int e : epochs) {
        RunConfig c = cfg;
        c.optimize.n_epoch = e;
        c.bench.output_dir = (root / ("epoch_" + std::to_string(e))).string();
        BenchResult r = run_benchmark(c);
        for (const EngineSummary& s : r.summaries) {
            AblationRow row;
            row.n_epoch = e;
            row.engine = s.engine;
            row.eval_mean = s.eval_mean;
            row.step_mean = s.step_mean;
            row.final_entropy = s.final_entropy_mean;
            row.final_coverage = s.final_coverage_mean;
            row.distance_m = s.final_distance_mean;
            row.trials_ok = s.trials_ok;
            row.trials_total = s.trials_total;
            rows.push_back(row);
        }
    }

    {
        const std::string path = (root / "ablation.csv").string();
        std::ofstream f(path);
        if (!f) throw std::runtime_error(path + ": cannot open for writing");
        f << "n_epoch,engine,eval_mean,step_mean,final_entropy_bits,final_coverage,distance_m,"
             "trials_ok,trials_total\n";
        for (const AblationRow& r : rows)
            f << r.n_epoch << ',' << engine_name(r.engine) << ',' << fmt17(r.eval_mean) << ','
              << fmt17(r.step_mean) << ',' << fmt17(r.final_entropy) << ','
              << fmt17(r.final_coverage) << ',' << fmt17(r.distance_m) << ',' << r.trials_ok
              << ',' << r.trials_total << "\n";
    }
    {
        const std::string path = (root / "ablation.txt").string();
        std::ofstream f(path);
        if (!f) throw std::runtime_error(path + ": cannot open for writing");
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-8s %-6s %10s %10s %14s %10s %9s %6s\n", "n_epoch",
                      "engine", "eval_s", "step_s", "final_H_bits", "final_cov", "dist_m", "ok");
        f << buf;
        for (const AblationRow& r : rows) {
            char ok[16];
            std::snprintf(ok, sizeof ok, "%d/%d", r.trials_ok, r.trials_total);
            std::snprintf(buf, sizeof buf, "%-8d %-6s %10.4f %10.4f %14.1f %10.3f %9.1f %6s\n",
                          r.n_epoch, engine_name(r.engine), r.eval_mean, r.step_mean,
                          r.final_entropy, r.final_coverage, r.distance_m, ok);
            f << buf;
        }
    }
    return rows;
}

}  // namespace infoscout
