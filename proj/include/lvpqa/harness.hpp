#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lvpqa/dynamics.hpp"
#include "lvpqa/purify.hpp"

namespace lvpqa {

/// One sweep over annealing times. JSON keys: n_qubits (int or list), J,
/// delta, h, lambda, T_grid, copies, buffer_width, methods, shadow_shots,
/// driver_seeds, shadow_seeds, dt, output. Unknown keys are rejected.
struct ExperimentConfig {
    std::vector<int> n_qubits{7};
    double coupling = -1.0;
    double anisotropy = -0.73;
    double field = 1.0;
    double noise_rate = 0.0025;
    std::vector<double> t_grid = default_t_grid();
    int copies = 2;
    int buffer_width = 1;
    std::vector<Method> methods{Method::Conventional, Method::Fvp, Method::Lvp};
    std::size_t shadow_shots = 0;
    std::vector<std::uint64_t> driver_seeds{1};
    std::vector<std::uint64_t> shadow_seeds;
    /// 0 selects the integrator default min(0.005, T/2000) per cell.
    double dt = 0.0;
    std::string output;

    /// 24 log-spaced points on [1, 200].
    static std::vector<double> default_t_grid();

    void validate() const;
    bool wants(Method m) const;
    XxzParams problem(int n) const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct SweepRecord {
    int n_qubits = 0;
    double anneal_time = 0.0;
    Method method = Method::Conventional;
    std::uint64_t driver_seed = 0;
    std::optional<std::uint64_t> shadow_seed;
    double energy = 0.0;
    double relative_error = 0.0;
    double purity = 0.0;
    double dominant_p = 0.0;
    double wall_time_s = 0.0;
};

struct RunOptions {
    /// Worker count for the (seed, T) cell pool; 0 leaves the OpenMP default.
    int threads = 0;
    /// Fill wall_time_s; off keeps the CSV byte-identical across runs.
    bool record_wall_time = false;
    int shadow_batches = 1;
};

struct CellMetadata {
    int n_qubits = 0;
    std::uint64_t driver_seed = 0;
    double anneal_time = 0.0;
    EvolveMetadata evolve;
    double ground_overlap = 0.0;
    /// Per shadow seed: jackknife bias and standard error of lvp-shadow.
    std::vector<std::pair<std::uint64_t, std::pair<double, double>>> shadow_jackknife;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    std::map<int, double> exact_energies;
    std::vector<CellMetadata> cells;
    double total_wall_s = 0.0;
};

/// Evolves once per (N, driver seed, T) and evaluates every requested method
/// on that state. Records are sorted by (N, seed, T, method, shadow seed).
/// Integrator failures are rethrown as NumericalError naming the cell.
SweepResult run_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

double relative_error(double energy, double exact);

struct MinTableRow {
    int n_qubits = 0;
    double exact = 0.0;
    std::map<Method, double> min_energy;
    std::map<Method, double> argmin_time;
};

struct MinTable {
    std::vector<Method> methods;
    std::vector<MinTableRow> rows;
};

/// Per (N, method): median over seeds at each T, then the minimum over T.
/// Each (N, method) needs at least two distinct T values.
MinTable min_table(const std::vector<SweepRecord>& records, const std::map<int, double>& exact);
/// Recovers E_g per N from (energy, relative_error) pairs.
std::map<int, double> infer_exact_energies(const std::vector<SweepRecord>& records);
std::string format_min_table(const MinTable& table);

inline constexpr const char* kCsvHeader =
    "n_qubits,T,method,driver_seed,shadow_seed,energy,relative_error,purity,dominant_p,wall_time_s";

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out);
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);
std::vector<SweepRecord> parse_csv(std::istream& in);
std::vector<SweepRecord> read_csv(const std::string& path);

std::string metadata_path(const std::string& csv_path);
void write_metadata(const SweepResult& result, const ExperimentConfig& cfg, const RunOptions& opts,
                    const std::string& path);
/// Exact energies stored in a sidecar, if present and readable.
std::optional<std::map<int, double>> read_metadata_exact(const std::string& path);

struct ShadowBenchRow {
    int n_qubits = 0;
    double anneal_time = 0.0;
    std::uint64_t driver_seed = 0;
    std::size_t shots = 0;
    std::uint64_t shadow_seed = 0;
    double shadow_energy = 0.0;
    double exact_lvp = 0.0;
    double exact_ground = 0.0;
    double jackknife_bias = 0.0;
    double jackknife_stderr = 0.0;
    int failed_terms = 0;
};

/// Shadow-vs-exact LVP convergence at shot counts M/16, M/4 and M for every
/// (N, driver seed, T, shadow seed) in the config.
std::vector<ShadowBenchRow> shadow_bench(const ExperimentConfig& cfg);
void write_shadow_bench_csv(const std::vector<ShadowBenchRow>& rows, std::ostream& out);

}  // namespace lvpqa
