#include "lvpqa/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <omp.h>

#include "json.hpp"
#include "lvpqa/errors.hpp"
#include "lvpqa/shadow.hpp"

namespace lvpqa {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

template <typename T>
T json_get(const json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::vector<double> ExperimentConfig::default_t_grid() {
    constexpr int kPoints = 24;
    constexpr double kLo = 1.0, kHi = 200.0;
    std::vector<double> grid(kPoints);
    for (int k = 0; k < kPoints; ++k) {
        grid[k] = kLo * std::pow(kHi / kLo, static_cast<double>(k) / (kPoints - 1));
    }
    grid.back() = kHi;
    return grid;
}

void ExperimentConfig::validate() const {
    if (n_qubits.empty()) throw ConfigError("n_qubits must list at least one register size");
    for (int n : n_qubits) problem(n).validate();
    if (!(noise_rate >= 0.0) || !std::isfinite(noise_rate)) throw ConfigError("lambda must be >= 0");
    if (t_grid.empty()) throw ConfigError("T_grid must be nonempty");
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!(t_grid[k] > 0.0) || !std::isfinite(t_grid[k])) throw ConfigError("T_grid values must be positive");
        if (k > 0 && !(t_grid[k] > t_grid[k - 1])) throw ConfigError("T_grid must be strictly increasing");
    }
    if (copies < 1) throw ConfigError("copies must be >= 1");
    if (buffer_width < 0) throw ConfigError("buffer_width must be >= 0");
    if (methods.empty()) throw ConfigError("methods must be nonempty");
    if (driver_seeds.empty()) throw ConfigError("driver_seeds must be nonempty");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be >= 0 (0 selects the default)");
    if (dt > t_grid.front()) throw ConfigError("dt exceeds the smallest annealing time");
    if (wants(Method::LvpShadow)) {
        if (shadow_shots < 2) throw ConfigError("lvp-shadow needs shadow_shots >= 2");
        if (shadow_seeds.empty()) throw ConfigError("lvp-shadow needs at least one shadow seed");
        if (copies != 2) throw ConfigError("lvp-shadow supports copies = 2 only");
    }
}

bool ExperimentConfig::wants(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

XxzParams ExperimentConfig::problem(int n) const { return XxzParams{n, coupling, anisotropy, field}; }

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        const char* k = key.c_str();
        if (key == "n_qubits") {
            cfg.n_qubits = value.is_array() ? json_get<std::vector<int>>(value, k)
                                            : std::vector<int>{json_get<int>(value, k)};
        } else if (key == "J") {
            cfg.coupling = json_get<double>(value, k);
        } else if (key == "delta") {
            cfg.anisotropy = json_get<double>(value, k);
        } else if (key == "h") {
            cfg.field = json_get<double>(value, k);
        } else if (key == "lambda") {
            cfg.noise_rate = json_get<double>(value, k);
        } else if (key == "T_grid") {
            cfg.t_grid = json_get<std::vector<double>>(value, k);
        } else if (key == "copies") {
            cfg.copies = json_get<int>(value, k);
        } else if (key == "buffer_width") {
            cfg.buffer_width = json_get<int>(value, k);
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const auto& name : json_get<std::vector<std::string>>(value, k)) {
                cfg.methods.push_back(method_from_name(name));
            }
        } else if (key == "shadow_shots") {
            cfg.shadow_shots = json_get<std::size_t>(value, k);
        } else if (key == "driver_seeds") {
            cfg.driver_seeds = json_get<std::vector<std::uint64_t>>(value, k);
        } else if (key == "shadow_seeds") {
            cfg.shadow_seeds = json_get<std::vector<std::uint64_t>>(value, k);
        } else if (key == "dt") {
            cfg.dt = value.is_null() ? 0.0 : json_get<double>(value, k);
        } else if (key == "output") {
            cfg.output = json_get<std::string>(value, k);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Sweep

double relative_error(double energy, double exact) { return (energy - exact) / std::abs(exact); }

namespace {

struct SizeContext {
    int n = 0;
    ComplexMatrix h_p;
    GroundState ground;
    std::vector<LocalTerm> terms;
    std::vector<RegionPartition> regions;
};

struct Cell {
    const SizeContext* ctx;
    std::uint64_t seed;
    double anneal_time;
};

struct CellOutput {
    std::vector<SweepRecord> records;
    CellMetadata meta;
};

CellOutput run_cell(const Cell& cell, const ExperimentConfig& cfg, const RunOptions& opts) {
    const SizeContext& ctx = *cell.ctx;
    const auto start = Clock::now();

    AnnealSpec spec{cfg.problem(ctx.n), DriverParams::from_seed(ctx.n, cell.seed), cell.anneal_time, cfg.noise_rate};
    IntegratorConfig icfg;
    icfg.dt = cfg.dt;
    EvolveResult evolved = evolve(spec, icfg);
    const double evolve_s = seconds_since(start);

    const DensityMatrix& rho = evolved.state;
    const double rho_purity = purity(rho);
    const SpectralDiagnostics diag = spectral_diagnostics(rho, ctx.ground);

    CellOutput out;
    out.meta.n_qubits = ctx.n;
    out.meta.driver_seed = cell.seed;
    out.meta.anneal_time = cell.anneal_time;
    out.meta.evolve = evolved.meta;
    out.meta.ground_overlap = diag.ground_overlap;

    auto push = [&](Method m, std::optional<std::uint64_t> shadow_seed, double energy, Clock::time_point t0) {
        SweepRecord r;
        r.n_qubits = ctx.n;
        r.anneal_time = cell.anneal_time;
        r.method = m;
        r.driver_seed = cell.seed;
        r.shadow_seed = shadow_seed;
        r.energy = energy;
        r.relative_error = relative_error(energy, ctx.ground.energy);
        r.purity = rho_purity;
        r.dominant_p = diag.dominant_population;
        r.wall_time_s = opts.record_wall_time ? evolve_s + seconds_since(t0) : 0.0;
        out.records.push_back(r);
    };

    for (Method m : cfg.methods) {
        const auto t0 = Clock::now();
        switch (m) {
            case Method::Conventional:
                push(m, std::nullopt, conventional_energy(rho, ctx.h_p), t0);
                break;
            case Method::Fvp:
                push(m, std::nullopt, fvp_energy(rho, ctx.h_p, cfg.copies), t0);
                break;
            case Method::Lvp:
                push(m, std::nullopt, lvp_energy(rho, ctx.terms, ctx.regions, cfg.copies).energy, t0);
                break;
            case Method::LvpShadow: {
                ShadowSampler sampler(rho);
                for (auto shadow_seed : cfg.shadow_seeds) {
                    const auto ts = Clock::now();
                    const ShadowEnsemble ens = sampler.sample(cfg.shadow_shots, shadow_seed);
                    const ShadowLvpEstimate est =
                        shadow_lvp_energy(ens, ctx.terms, ctx.regions, ShadowLvpOptions{opts.shadow_batches, true});
                    push(m, shadow_seed, est.estimate.energy, ts);
                    out.meta.shadow_jackknife.push_back({shadow_seed, {est.jackknife_bias, est.jackknife_stderr}});
                }
                break;
            }
        }
    }
    return out;
}

auto record_key(const SweepRecord& r) {
    return std::make_tuple(r.n_qubits, r.driver_seed, r.anneal_time, static_cast<int>(r.method),
                           r.shadow_seed.value_or(0));
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const auto start = Clock::now();

    std::vector<SizeContext> sizes;
    sizes.reserve(cfg.n_qubits.size());
    SweepResult result;
    for (int n : cfg.n_qubits) {
        if (result.exact_energies.count(n)) continue;
        SizeContext ctx;
        ctx.n = n;
        const XxzParams p = cfg.problem(n);
        ctx.h_p = build_problem(p);
        ctx.ground = ground_state(ctx.h_p);
        ctx.terms = build_local_terms(p);
        ctx.regions = build_all_regions(cfg.buffer_width, n);
        result.exact_energies[n] = ctx.ground.energy;
        sizes.push_back(std::move(ctx));
    }

    std::vector<Cell> cells;
    for (const auto& ctx : sizes) {
        for (auto seed : cfg.driver_seeds) {
            for (double t : cfg.t_grid) cells.push_back(Cell{&ctx, seed, t});
        }
    }
    // Longest annealing times first so the pool drains evenly.
    std::vector<std::size_t> order(cells.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double wa = cells[a].anneal_time * std::pow(4.0, cells[a].ctx->n);
        const double wb = cells[b].anneal_time * std::pow(4.0, cells[b].ctx->n);
        return wa > wb;
    });

    std::vector<CellOutput> outputs(cells.size());
    std::exception_ptr failure;
    const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
    const auto n_cells = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t j = 0; j < n_cells; ++j) {
        const Cell& cell = cells[order[j]];
        try {
            outputs[order[j]] = run_cell(cell, cfg, opts);
        } catch (const NumericalError& e) {
#pragma omp critical
            if (!failure) {
                failure = std::make_exception_ptr(NumericalError(
                    "N=" + std::to_string(cell.ctx->n) + " driver_seed=" + std::to_string(cell.seed) +
                    " T=" + fmt_g(cell.anneal_time) + ": " + e.what()));
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& o : outputs) {
        result.records.insert(result.records.end(), o.records.begin(), o.records.end());
        result.cells.push_back(std::move(o.meta));
    }
    std::stable_sort(result.records.begin(), result.records.end(),
                     [](const SweepRecord& a, const SweepRecord& b) { return record_key(a) < record_key(b); });
    result.total_wall_s = seconds_since(start);
    return result;
}

// ---------------------------------------------------------------------------
// Minimum-energy table

std::map<int, double> infer_exact_energies(const std::vector<SweepRecord>& records) {
    // relative_error = (E - E_g)/|E_g|  =>  E_g = E/(1 - rel) if E_g < 0, E/(1 + rel) if E_g > 0
    std::map<int, std::vector<double>> candidates;
    for (const auto& r : records) {
        const double neg = r.energy / (1.0 - r.relative_error);
        const double pos = r.energy / (1.0 + r.relative_error);
        candidates[r.n_qubits].push_back(neg < 0.0 ? neg : pos);
    }
    std::map<int, double> out;
    for (auto& [n, v] : candidates) out[n] = median(v);
    return out;
}

MinTable min_table(const std::vector<SweepRecord>& records, const std::map<int, double>& exact) {
    // (N, method) -> T -> energies over seeds
    std::map<std::pair<int, Method>, std::map<double, std::vector<double>>> grouped;
    std::set<Method> methods;
    for (const auto& r : records) {
        grouped[{r.n_qubits, r.method}][r.anneal_time].push_back(r.energy);
        methods.insert(r.method);
    }

    MinTable table;
    table.methods.assign(methods.begin(), methods.end());
    std::map<int, MinTableRow> rows;
    for (const auto& [key, by_time] : grouped) {
        const auto [n, method] = key;
        if (by_time.size() < 2) {
            throw ConfigError("minimum over T is undefined for N=" + std::to_string(n) + " method " +
                              method_name(method) + ": only " + std::to_string(by_time.size()) +
                              " annealing time in the records");
        }
        MinTableRow& row = rows[n];
        row.n_qubits = n;
        auto it = exact.find(n);
        if (it == exact.end()) throw ConfigError("no exact energy for N=" + std::to_string(n));
        row.exact = it->second;
        double best = INFINITY, best_t = 0.0;
        for (const auto& [t, energies] : by_time) {
            const double med = median(energies);
            if (med < best) {
                best = med;
                best_t = t;
            }
        }
        row.min_energy[method] = best;
        row.argmin_time[method] = best_t;
    }
    for (auto& [n, row] : rows) table.rows.push_back(std::move(row));
    return table;
}

std::string format_min_table(const MinTable& table) {
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-4s", "N");
    os << buf;
    for (Method m : table.methods) {
        std::snprintf(buf, sizeof buf, " %14s", method_name(m).c_str());
        os << buf;
    }
    std::snprintf(buf, sizeof buf, " %14s\n", "exact");
    os << buf;
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%-4d", row.n_qubits);
        os << buf;
        for (Method m : table.methods) {
            auto it = row.min_energy.find(m);
            if (it == row.min_energy.end()) {
                std::snprintf(buf, sizeof buf, " %14s", "-");
            } else {
                std::snprintf(buf, sizeof buf, " %14.3f", it->second);
            }
            os << buf;
        }
        std::snprintf(buf, sizeof buf, " %14.3f\n", row.exact);
        os << buf;
    }
    os << "\nminimum over T of the median over seeds; relative errors:\n";
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%-4d", row.n_qubits);
        os << buf;
        for (Method m : table.methods) {
            auto it = row.min_energy.find(m);
            if (it == row.min_energy.end()) {
                std::snprintf(buf, sizeof buf, " %14s", "-");
            } else {
                std::snprintf(buf, sizeof buf, " %14.5f", relative_error(it->second, row.exact));
            }
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.n_qubits << ',' << fmt_g(r.anneal_time) << ',' << method_name(r.method) << ',' << r.driver_seed << ',';
        if (r.shadow_seed) {
            out << *r.shadow_seed;
        } else {
            out << '-';
        }
        out << ',' << fmt_g(r.energy) << ',' << fmt_g(r.relative_error) << ',' << fmt_g(r.purity) << ','
            << fmt_g(r.dominant_p) << ',' << fmt_g(r.wall_time_s) << '\n';
    }
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open CSV for writing: " + path);
    write_csv(records, f);
    f.flush();
    if (!f) throw IoError("failed writing CSV: " + path);
}

std::vector<SweepRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("CSV header does not match the record format");
    std::vector<SweepRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 10) throw ConfigError("CSV line " + std::to_string(line_no) + ": expected 10 fields");
        try {
            SweepRecord r;
            r.n_qubits = std::stoi(f[0]);
            r.anneal_time = std::stod(f[1]);
            r.method = method_from_name(f[2]);
            r.driver_seed = std::stoull(f[3]);
            if (f[4] != "-") r.shadow_seed = std::stoull(f[4]);
            r.energy = std::stod(f[5]);
            r.relative_error = std::stod(f[6]);
            r.purity = std::stod(f[7]);
            r.dominant_p = std::stod(f[8]);
            r.wall_time_s = std::stod(f[9]);
            records.push_back(r);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("CSV line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return records;
}

std::vector<SweepRecord> read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open CSV: " + path);
    return parse_csv(f);
}

// ---------------------------------------------------------------------------
// Sidecar metadata

std::string metadata_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

void write_metadata(const SweepResult& result, const ExperimentConfig& cfg, const RunOptions& opts,
                    const std::string& path) {
    json meta;
    meta["tool"] = "lvpqa";
    meta["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION);
    meta["aggregation"] = "median over driver seeds at each T, then minimum over T";
    meta["integrator"] = "fixed-step RK4";
    meta["threads"] = opts.threads;
    meta["total_wall_s"] = result.total_wall_s;
    json exact = json::object();
    for (const auto& [n, e] : result.exact_energies) exact[std::to_string(n)] = e;
    meta["exact_energies"] = exact;

    json config;
    config["n_qubits"] = cfg.n_qubits;
    config["J"] = cfg.coupling;
    config["delta"] = cfg.anisotropy;
    config["h"] = cfg.field;
    config["lambda"] = cfg.noise_rate;
    config["T_grid"] = cfg.t_grid;
    config["copies"] = cfg.copies;
    config["buffer_width"] = cfg.buffer_width;
    std::vector<std::string> names;
    for (Method m : cfg.methods) names.push_back(method_name(m));
    config["methods"] = names;
    config["shadow_shots"] = cfg.shadow_shots;
    config["driver_seeds"] = cfg.driver_seeds;
    config["shadow_seeds"] = cfg.shadow_seeds;
    config["dt"] = cfg.dt;
    meta["config"] = config;

    json cells = json::array();
    for (const auto& c : result.cells) {
        json jc;
        jc["n_qubits"] = c.n_qubits;
        jc["driver_seed"] = c.driver_seed;
        jc["T"] = c.anneal_time;
        jc["dt"] = c.evolve.dt;
        jc["steps"] = c.evolve.steps;
        jc["max_step_hermitian_deviation"] = c.evolve.max_step_hermitian_deviation;
        jc["symmetrize_delta"] = c.evolve.final_symmetrize_delta;
        jc["trace_delta"] = c.evolve.final_trace_delta;
        jc["min_eigenvalue"] = c.evolve.min_eigenvalue;
        jc["ground_overlap"] = c.ground_overlap;
        json shadows = json::array();
        for (const auto& [seed, stats] : c.shadow_jackknife) {
            shadows.push_back({{"shadow_seed", seed},
                               {"jackknife_bias", std::isfinite(stats.first) ? json(stats.first) : json(nullptr)},
                               {"jackknife_stderr", std::isfinite(stats.second) ? json(stats.second) : json(nullptr)}});
        }
        if (!shadows.empty()) jc["lvp_shadow"] = shadows;
        cells.push_back(jc);
    }
    meta["cells"] = cells;

    std::ofstream f(path);
    if (!f) throw IoError("cannot open metadata file for writing: " + path);
    f << meta.dump(2) << '\n';
    if (!f) throw IoError("failed writing metadata file: " + path);
}

std::optional<std::map<int, double>> read_metadata_exact(const std::string& path) {
    std::ifstream f(path);
    if (!f) return std::nullopt;
    try {
        const json meta = json::parse(f);
        std::map<int, double> out;
        for (const auto& [k, v] : meta.at("exact_energies").items()) out[std::stoi(k)] = v.get<double>();
        return out;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Shadow benchmark

std::vector<ShadowBenchRow> shadow_bench(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.shadow_shots < 32) throw ConfigError("shadow-bench needs shadow_shots >= 32");
    if (cfg.shadow_seeds.empty()) throw ConfigError("shadow-bench needs at least one shadow seed");
    if (cfg.copies != 2) throw ConfigError("shadow-bench compares against LVP at copies = 2");

    const std::vector<std::size_t> levels{cfg.shadow_shots / 16, cfg.shadow_shots / 4, cfg.shadow_shots};
    std::vector<ShadowBenchRow> rows;
    for (int n : cfg.n_qubits) {
        const XxzParams p = cfg.problem(n);
        const ComplexMatrix h_p = build_problem(p);
        const double e_g = ground_state_energy(h_p);
        const auto terms = build_local_terms(p);
        const auto regions = build_all_regions(cfg.buffer_width, n);
        for (auto seed : cfg.driver_seeds) {
            for (double t : cfg.t_grid) {
                IntegratorConfig icfg;
                icfg.dt = cfg.dt;
                const EvolveResult evolved =
                    evolve(AnnealSpec{p, DriverParams::from_seed(n, seed), t, cfg.noise_rate}, icfg);
                const double exact_lvp = lvp_energy(evolved.state, terms, regions, 2).energy;
                ShadowSampler sampler(evolved.state);
                for (auto shadow_seed : cfg.shadow_seeds) {
                    const ShadowEnsemble full = sampler.sample(cfg.shadow_shots, shadow_seed);
                    for (auto m : levels) {
                        ShadowEnsemble ens{full.n_qubits, full.seed,
                                           {full.snapshots.begin(), full.snapshots.begin() + static_cast<std::ptrdiff_t>(m)}};
                        const auto est = shadow_lvp_energy(ens, terms, regions);
                        rows.push_back(ShadowBenchRow{n, t, seed, m, shadow_seed, est.estimate.energy, exact_lvp, e_g,
                                                      est.jackknife_bias, est.jackknife_stderr,
                                                      est.estimate.failed_terms()});
                    }
                }
            }
        }
    }
    return rows;
}

void write_shadow_bench_csv(const std::vector<ShadowBenchRow>& rows, std::ostream& out) {
    out << "n_qubits,T,driver_seed,shots,shadow_seed,shadow_energy,exact_lvp,exact_ground,relative_gap,"
           "jackknife_bias,jackknife_stderr,failed_terms\n";
    for (const auto& r : rows) {
        out << r.n_qubits << ',' << fmt_g(r.anneal_time) << ',' << r.driver_seed << ',' << r.shots << ','
            << r.shadow_seed << ',' << fmt_g(r.shadow_energy) << ',' << fmt_g(r.exact_lvp) << ','
            << fmt_g(r.exact_ground) << ',' << fmt_g(std::abs(r.shadow_energy - r.exact_lvp) / std::abs(r.exact_ground))
            << ',' << fmt_g(r.jackknife_bias) << ',' << fmt_g(r.jackknife_stderr) << ',' << r.failed_terms << '\n';
    }
}

}  // namespace lvpqa
