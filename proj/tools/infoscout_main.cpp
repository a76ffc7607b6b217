#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infoscout/bench.hpp"

namespace {

void print_file(const std::string& path) {
    std::ifstream in(path);
    if (in) std::cout << in.rdbuf();
}

infoscout::RunConfig base_config(const std::string& config_path) {
    return config_path.empty() ? infoscout::default_run_config()
                               : infoscout::load_run_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-driven exploration workbench"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the Monte Carlo exploration benchmark");
    std::string run_config, run_engines, run_out;
    int run_trials = 0;
    unsigned run_seed = 0;
    bool run_serial = false;
    bool run_check = false;
    run->add_option("--config", run_config, "INI config file (defaults used when omitted)");
    run->add_option("--engines", run_engines, "comma list of ng,gpbo,bkio");
    run->add_option("--trials", run_trials, "Monte Carlo trials per engine");
    run->add_option("--out", run_out, "output directory");
    run->add_option("--seed", run_seed, "base seed, trial t runs with seed+t");
    run->add_flag("--serial", run_serial, "run trials one at a time (stable timings)");
    run->add_flag("--check", run_check, "assert cross-engine expectations, nonzero exit on failure");

    auto* map = app.add_subcommand("map", "map utilities");
    map->require_subcommand(1);
    auto* gen = map->add_subcommand("gen", "generate a ground-truth map file");
    std::string gen_kind = "structured";
    std::string gen_out;
    double gen_width = 24.0, gen_height = 14.0, gen_res = 0.2;
    unsigned gen_seed = 1;
    int gen_obstacles = 12;
    gen->add_option("--kind", gen_kind, "structured or unstructured");
    gen->add_option("--out", gen_out, "output map path")->required();
    gen->add_option("--width", gen_width, "meters");
    gen->add_option("--height", gen_height, "meters");
    gen->add_option("--resolution", gen_res, "meters per cell");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--obstacles", gen_obstacles, "ellipse count, unstructured only");

    auto* ab = app.add_subcommand("ablate", "sweep optimizer epoch counts");
    std::string ab_config, ab_engines, ab_out;
    std::vector<int> ab_epochs = {1, 30, 60};
    int ab_trials = 0;
    unsigned ab_seed = 0;
    bool ab_serial = false;
    ab->add_option("--config", ab_config, "INI config file");
    ab->add_option("--epochs", ab_epochs, "epoch counts to sweep")->delimiter(',');
    ab->add_option("--engines", ab_engines, "comma list, ng is skipped");
    ab->add_option("--trials", ab_trials, "Monte Carlo trials per engine");
    ab->add_option("--out", ab_out, "output directory");
    ab->add_option("--seed", ab_seed, "base seed");
    ab->add_flag("--serial", ab_serial, "run trials one at a time");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            infoscout::RunConfig cfg = base_config(run_config);
            if (run->count("--engines")) cfg.bench.engines = infoscout::parse_engine_list(run_engines);
            if (run->count("--trials")) cfg.bench.trials = run_trials;
            if (run->count("--out")) cfg.bench.output_dir = run_out;
            if (run->count("--seed")) cfg.bench.base_seed = run_seed;
            if (run_serial) cfg.bench.serial = true;
            if (run_check) cfg.bench.check = true;
            const infoscout::BenchResult result = infoscout::run_benchmark(cfg);
            print_file(result.output_dir + "/summary.txt");
            return (cfg.bench.check && !result.checks_ok) ? 2 : 0;
        }
        if (gen->parsed()) {
            infoscout::WorldGenConfig w;
            w.kind = infoscout::parse_world_kind(gen_kind);
            if (w.kind == infoscout::WorldGenConfig::Kind::file)
                throw std::invalid_argument("map gen: kind must be structured or unstructured");
            w.width_m = gen_width;
            w.height_m = gen_height;
            w.resolution = gen_res;
            w.seed = gen_seed;
            w.n_obstacles = gen_obstacles;
            const infoscout::GroundTruthMap m = infoscout::make_world(w);
            infoscout::save_map(m, gen_out);
            std::cout << "wrote " << gen_out << " (" << m.geom.width_cells << " x " << m.geom.height_cells
                      << " cells at " << m.geom.resolution << " m)\n";
            return 0;
        }
        if (ab->parsed()) {
            infoscout::RunConfig cfg = base_config(ab_config);
            if (ab->count("--engines")) cfg.bench.engines = infoscout::parse_engine_list(ab_engines);
            if (ab->count("--trials")) cfg.bench.trials = ab_trials;
            if (ab->count("--out")) cfg.bench.output_dir = ab_out;
            if (ab->count("--seed")) cfg.bench.base_seed = ab_seed;
            if (ab_serial) cfg.bench.serial = true;
            infoscout::ablate_epochs(cfg, ab_epochs);
            print_file(cfg.bench.output_dir + "/ablate/ablation.txt");
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
