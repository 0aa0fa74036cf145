// lvpqa: annealing sweeps, minimum-energy tables, exact energies and the
// shadow convergence study.

#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "lvpqa/errors.hpp"
#include "lvpqa/harness.hpp"
#include "lvpqa/model.hpp"

namespace {

using namespace lvpqa;

int cmd_run(const std::string& config_path, std::string out_path, int threads, bool timings, int batches) {
    const ExperimentConfig cfg = load_config(config_path);
    if (out_path.empty()) out_path = cfg.output;
    if (out_path.empty()) throw ConfigError("no output path: pass --out or set \"output\" in the config");

    RunOptions opts;
    opts.threads = threads;
    opts.record_wall_time = timings;
    opts.shadow_batches = batches;
    const SweepResult result = run_sweep(cfg, opts);
    emit_csv(result.records, out_path);
    write_metadata(result, cfg, opts, metadata_path(out_path));
    std::fprintf(stderr, "wrote %zu records to %s (%.1f s)\n", result.records.size(), out_path.c_str(),
                 result.total_wall_s);
    return 0;
}

int cmd_table(const std::string& in_path) {
    const auto records = read_csv(in_path);
    auto exact = read_metadata_exact(metadata_path(in_path));
    if (!exact) exact = infer_exact_energies(records);
    std::cout << format_min_table(min_table(records, *exact));
    return 0;
}

int cmd_exact(int n, double j, double delta, double h) {
    const XxzParams p{n, j, delta, h};
    p.validate();
    std::printf("%.10f\n", ground_state_energy(build_problem(p)));
    return 0;
}

int cmd_shadow_bench(const std::string& config_path) {
    const ExperimentConfig cfg = load_config(config_path);
    const auto rows = shadow_bench(cfg);
    write_shadow_bench_csv(rows, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy quantum annealing with virtual purification"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path;
    int threads = 0, batches = 1;
    bool timings = false;
    auto* run = app.add_subcommand("run", "sweep annealing times and write a CSV");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    run->add_option("--out", out_path, "output CSV (defaults to the config's output)");
    run->add_option("--threads", threads, "worker threads for the cell pool")->check(CLI::NonNegativeNumber);
    run->add_flag("--timings", timings, "fill wall_time_s (CSV is then not byte-reproducible)");
    run->add_option("--shadow-batches", batches, "median-of-means batches for lvp-shadow")->check(CLI::PositiveNumber);

    auto* table = app.add_subcommand("table", "minimum-energy table from a sweep CSV");
    table->add_option("--in", in_path, "sweep CSV")->required();

    int n = 6;
    double j = -1.0, delta = -0.73, h = 1.0;
    auto* exact = app.add_subcommand("exact", "exact ground energy of the XXZ chain");
    exact->set_help_flag("--help", "print this help message and exit");  // frees --h for the field
    exact->add_option("--n", n, "number of qubits")->required();
    exact->add_option("--j", j, "coupling J");
    exact->add_option("--delta", delta, "anisotropy");
    exact->add_option("--h", h, "y-field strength");

    std::string bench_config;
    auto* bench = app.add_subcommand("shadow-bench", "shadow LVP convergence against the exact estimator");
    bench->add_option("--config", bench_config, "JSON experiment config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(config_path, out_path, threads, timings, batches);
        if (*table) return cmd_table(in_path);
        if (*exact) return cmd_exact(n, j, delta, h);
        if (*bench) return cmd_shadow_bench(bench_config);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
