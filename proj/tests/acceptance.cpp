// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Sweep CSVs are left in the working directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lvpqa/dynamics.hpp"
#include "lvpqa/harness.hpp"
#include "lvpqa/model.hpp"
#include "lvpqa/purify.hpp"
#include "lvpqa/shadow.hpp"
#include "oracles.hpp"

using namespace lvpqa;

namespace {

using Clock = std::chrono::steady_clock;

// RK4 step used for the long sweeps; energies move by < 1e-4 against dt = 0.005.
constexpr double kSweepDt = 0.02;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// (method, T) -> seed-median relative error
std::map<Method, std::map<double, double>> median_curves(const std::vector<SweepRecord>& records) {
    std::map<Method, std::map<double, std::vector<double>>> grouped;
    for (const auto& r : records) grouped[r.method][r.anneal_time].push_back(r.relative_error);
    std::map<Method, std::map<double, double>> out;
    for (auto& [m, by_t] : grouped)
        for (auto& [t, v] : by_t) out[m][t] = median(v);
    return out;
}

double curve_min(const std::map<double, double>& curve) {
    double best = INFINITY;
    for (const auto& [t, v] : curve) best = std::min(best, v);
    return best;
}

// Shared sweeps, run lazily.
const SweepResult& sweep_n7() {
    static const SweepResult result = [] {
        ExperimentConfig cfg;
        cfg.n_qubits = {7};
        cfg.noise_rate = 0.0025;
        cfg.copies = 2;
        cfg.buffer_width = 1;
        cfg.driver_seeds = {1, 2, 3};
        cfg.dt = kSweepDt;
        SweepResult r = run_sweep(cfg);
        emit_csv(r.records, "acceptance_n7_lambda0.0025.csv");
        write_metadata(r, cfg, {}, metadata_path("acceptance_n7_lambda0.0025.csv"));
        return r;
    }();
    return result;
}

SweepResult run_n6(int buffer_width, const std::string& csv) {
    ExperimentConfig cfg;
    cfg.n_qubits = {6};
    cfg.noise_rate = 0.005;
    cfg.copies = 2;
    cfg.buffer_width = buffer_width;
    cfg.driver_seeds = {1, 2, 3, 4, 5};
    cfg.dt = kSweepDt;
    SweepResult r = run_sweep(cfg);
    emit_csv(r.records, csv);
    write_metadata(r, cfg, {}, metadata_path(csv));
    return r;
}

const SweepResult& sweep_n6() {
    static const SweepResult result = run_n6(1, "acceptance_n6_lambda0.005.csv");
    return result;
}

// Buffer-free regions (C adjacent to A); reported alongside the w=1 gate only.
const SweepResult& sweep_n6_unbuffered() {
    static const SweepResult result = run_n6(0, "acceptance_n6_lambda0.005_w0.csv");
    return result;
}

// per-seed minimum over T of the LVP energy
std::map<std::uint64_t, double> lvp_minima(const SweepResult& r) {
    std::map<std::uint64_t, double> out;
    for (const auto& rec : r.records) {
        if (rec.method != Method::Lvp) continue;
        auto it = out.find(rec.driver_seed);
        if (it == out.end() || rec.energy < it->second) out[rec.driver_seed] = rec.energy;
    }
    return out;
}

Outcome exact_column() {
    const auto t0 = Clock::now();
    const std::map<int, double> table{{6, -14.058}, {7, -16.388}, {8, -18.729}, {9, -21.068}};
    bool ok = true;
    std::string detail;
    for (const auto& [n, paper] : table) {
        const double e = ground_state_energy(build_problem({n, -1.0, -0.73, 1.0}));
        ok = ok && std::abs(e - paper) <= 1e-3;
        detail += fmt("N=%d %.4f (reference %.3f); ", n, e, paper);
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 10.0;
    return {ok, detail + fmt("%.2f s", secs)};
}

Outcome tradeoff_curve() {
    const auto curves = median_curves(sweep_n7().records);
    const auto& conv = curves.at(Method::Conventional);
    const double lo = curve_min(conv);
    const double first = conv.begin()->second, last = conv.rbegin()->second;
    double t_min = 0.0;
    for (const auto& [t, v] : conv)
        if (v == lo) t_min = t;
    const bool interior = t_min != conv.begin()->first && t_min != conv.rbegin()->first;
    const bool ok = interior && first >= 1.2 * lo && last >= 1.2 * lo;
    return {ok, fmt("conventional min rel err %.4f at T=%.2f; T=%.0f: %.4f (x%.2f), T=%.0f: %.4f (x%.2f)", lo, t_min,
                    conv.begin()->first, first, first / lo, conv.rbegin()->first, last, last / lo)};
}

Outcome mitigation_ordering() {
    const auto curves = median_curves(sweep_n7().records);
    const double conv = curve_min(curves.at(Method::Conventional));
    const double fvp = curve_min(curves.at(Method::Fvp));
    const double lvp = curve_min(curves.at(Method::Lvp));
    const bool ok = lvp < conv && fvp < conv && std::abs(lvp - fvp) <= 0.08;
    return {ok, fmt("min rel err over T (median of 3 seeds): conventional %.4f, fvp %.4f, lvp %.4f; |lvp-fvp| = %.4f",
                    conv, fvp, lvp, std::abs(lvp - fvp))};
}

Outcome undershoot() {
    const SweepResult& r = sweep_n6();
    const double eg = r.exact_energies.at(6);
    auto describe = [&](const std::map<std::uint64_t, double>& minima, int& below) {
        std::string seeds;
        below = 0;
        for (const auto& [seed, e] : minima) {
            below += e < eg;
            seeds += fmt(" %llu:%.3f", static_cast<unsigned long long>(seed), e);
        }
        return seeds;
    };
    int below = 0, below_w0 = 0;
    const std::string seeds = describe(lvp_minima(r), below);
    const std::string seeds_w0 = describe(lvp_minima(sweep_n6_unbuffered()), below_w0);
    const MinTable table = min_table(r.records, r.exact_energies);
    const MinTable table_w0 = min_table(sweep_n6_unbuffered().records, r.exact_energies);
    const auto& row = table.rows.front();
    const double lvp_w0 = table_w0.rows.front().min_energy.at(Method::Lvp);
    return {below >= 1,
            fmt("E_g %.3f; w=1 per-seed min LVP%s; %d/5 below E_g. Median table: conv %.3f, fvp %.3f, lvp %.3f "
                "(reference: -11.212, -13.413, -14.144). Informational, w=0:%s; %d/5 below E_g; median lvp %.3f",
                eg, seeds.c_str(), below, row.min_energy.at(Method::Conventional), row.min_energy.at(Method::Fvp),
                row.min_energy.at(Method::Lvp), seeds_w0.c_str(), below_w0, lvp_w0)};
}

Outcome integrator_oracle() {
    PauliSum h(2);
    h.add(-1.0, {{0, Axis::X}, {1, Axis::X}})
        .add(-1.0, {{0, Axis::Y}, {1, Axis::Y}})
        .add(0.73, {{0, Axis::Z}, {1, Axis::Z}})
        .add(0.6, {{0, Axis::Y}})
        .add(-0.4, {{1, Axis::X}});
    const NoiseSpec noise = NoiseSpec::depolarizing(2, 0.01);
    std::vector<ComplexMatrix> jumps;
    for (const auto& j : noise.jumps) jumps.push_back(pauli_string(2, {j}));
    const DensityMatrix rho0 = initial_state(DriverParams::from_amplitudes({0.5, 0.5}));
    const EvolveResult r = evolve_schedule(rho0, LinearSchedule{h, h, 5.0}, noise, IntegratorConfig{0.0, 10});
    const ComplexMatrix exact = oracle::evolve_exact(h.to_dense(), jumps, noise.rate, rho0.matrix(), 5.0);
    const double frob = (r.state.matrix() - exact).norm();
    double drift = r.meta.final_trace_delta;
    for (const auto& p : r.trajectory) drift = std::max(drift, std::abs(p.trace - 1.0));

    const AnnealSpec spec{{3, -1.0, -0.73, 1.0}, DriverParams::from_seed(3, 5), 10.0, 0.0025};
    auto run = [&](double dt) { return evolve(spec, IntegratorConfig{dt, 0}).state.matrix(); };
    const ComplexMatrix reference = run(0.1 / 8.0);
    const double factor = (run(0.1) - reference).norm() / (run(0.05) - reference).norm();
    const bool ok = frob <= 1e-6 && drift <= 1e-8 && factor >= 12.0 && factor <= 20.0;
    return {ok, fmt("N=2 Liouvillian-exponential Frobenius %.2e; trace drift %.2e; RK4 dt-halving factor %.2f", frob,
                    drift, factor)};
}

Outcome analytic_decay() {
    double worst = 0.0;
    ComplexVector zero = ComplexVector::Zero(2);
    zero(0) = 1.0;
    for (double rate : {0.0025, 0.005}) {
        for (double t : {1.0, 10.0, 100.0}) {
            const EvolveResult r = evolve_schedule(DensityMatrix::pure(1, zero), LinearSchedule{PauliSum(1), PauliSum(1), t},
                                                   NoiseSpec::depolarizing(1, rate), {});
            worst = std::max(worst, std::abs(expectation(r.state, single_pauli(Axis::Z)) - std::exp(-4.0 * rate * t)));
        }
    }
    return {worst <= 1e-6, fmt("max |<Z>(T) - exp(-4 lambda T)| = %.2e over 6 (lambda, T) pairs", worst)};
}

Outcome purification_identities() {
    std::mt19937_64 rng(2024);
    const int n = 6;
    const XxzParams p{n, -1.0, -0.73, 1.0};
    const ComplexMatrix hp = build_problem(p);
    const auto terms = build_local_terms(p);

    // pure states: FVP = conventional
    double fvp_pure = 0.0;
    ComplexVector psi = oracle::random_matrix(1 << n, 1, rng);
    psi.normalize();
    for (const DensityMatrix& pure : {DensityMatrix::pure(n, psi), DensityMatrix::pure(n, ground_state(hp).vector)}) {
        for (int copies = 2; copies <= 4; ++copies) {
            fvp_pure = std::max(fvp_pure, std::abs(fvp_energy(pure, hp, copies) - conventional_energy(pure, hp)));
        }
    }

    const AnnealSpec spec{p, DriverParams::from_seed(n, 1), 8.0, 0.0025};
    const DensityMatrix rho = evolve(spec, IntegratorConfig{0.01, 0}).state;
    const double lvp1 = std::abs(lvp_energy(rho, terms, build_all_regions(1, n), 1).energy - conventional_energy(rho, hp));
    const double full = std::abs(lvp_energy(rho, terms, build_all_regions(2, n), 2).energy - fvp_energy(rho, hp, 2));

    // product state across the (A u B | C) cut for term 0 at N=5, w=1: C = {3}
    const XxzParams p5{5, -1.0, -0.73, 1.0};
    const ComplexMatrix rho_ab = oracle::random_density(16, rng), rho_c = oracle::random_density(2, rng);
    ComplexMatrix prod(32, 32);
    for (int x = 0; x < 32; ++x)
        for (int y = 0; y < 32; ++y)
            prod(x, y) = rho_ab(((x >> 2) << 1) | (x & 1), ((y >> 2) << 1) | (y & 1)) * rho_c((x >> 1) & 1, (y >> 1) & 1);
    const double dev = std::abs(term_deviation(DensityMatrix(5, prod), build_local_term(p5, 0), build_regions(0, 1, 5), 2));

    const bool ok = fvp_pure <= 1e-12 && lvp1 <= 1e-10 && full <= 1e-9 && dev <= 1e-12;
    return {ok, fmt("fvp(pure)-conv %.1e; lvp(n=1)-conv %.1e; full-region lvp-fvp %.1e; product-state D_i %.1e",
                    fvp_pure, lvp1, full, dev)};
}

Outcome shadow_convergence() {
    const auto t0 = Clock::now();
    // estimate_rdm error, M vs 4M
    std::mt19937_64 rng(8);
    const DensityMatrix rho2(2, oracle::random_density(4, rng));
    ShadowSampler s2(rho2);
    std::vector<double> ratios;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double a = (estimate_rdm(s2.sample(5000, seed), QubitSubset::all(2)) - rho2.matrix()).norm();
        const double b = (estimate_rdm(s2.sample(20000, 100 + seed), QubitSubset::all(2)) - rho2.matrix()).norm();
        ratios.push_back(b / a);
    }
    const double ratio = median(ratios);

    // purity of known single-qubit states
    ComplexVector zero = ComplexVector::Zero(2);
    zero(0) = 1.0;
    ShadowSampler pure(DensityMatrix::pure(1, zero)), mixed(DensityMatrix::maximally_mixed(1));
    const double p_pure = estimate_purity(pure.sample(100000, 1), QubitSubset::all(1));
    const double p_mixed = estimate_purity(mixed.sample(100000, 2), QubitSubset::all(1));

    // shadow LVP vs exact LVP on an annealed N=6 state
    const int n = 6;
    const XxzParams p{n, -1.0, -0.73, 1.0};
    const double eg = ground_state_energy(build_problem(p));
    const AnnealSpec spec{p, DriverParams::from_seed(n, 1), 8.0, 0.0025};
    const DensityMatrix rho = evolve(spec, IntegratorConfig{0.01, 0}).state;
    const auto terms = build_local_terms(p);
    const auto regions = build_all_regions(1, n);
    const double exact = lvp_energy(rho, terms, regions, 2).energy;
    ShadowSampler sampler(rho);
    std::vector<double> gaps;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto est = shadow_lvp_energy(sampler.sample(200000, seed), terms, regions, {1, false});
        gaps.push_back(std::abs(est.estimate.energy - exact) / std::abs(eg));
    }
    const double gap = median(gaps);
    const double secs = seconds_since(t0);
    const bool ok = ratio >= 0.3 && ratio <= 0.7 && std::abs(p_pure - 1.0) <= 0.05 && std::abs(p_mixed - 0.5) <= 0.05 &&
                    gap < 0.03 && secs < 600.0;
    return {ok, fmt("rdm error ratio M->4M %.3f; purity pure %.4f, mixed %.4f; N=6 M=2e5 |shadow-exact|/|E_g| "
                    "median %.4f (10 seeds); %.0f s",
                    ratio, p_pure, p_mixed, gap, secs)};
}

Outcome variational_floor() {
    double worst = INFINITY;
    int checked = 0;
    for (const SweepResult* r : {&sweep_n7(), &sweep_n6(), &sweep_n6_unbuffered()}) {
        for (const auto& rec : r->records) {
            if (rec.method != Method::Conventional && rec.method != Method::Fvp) continue;
            worst = std::min(worst, rec.energy - r->exact_energies.at(rec.n_qubits));
            ++checked;
        }
    }
    return {worst >= -1e-6, fmt("min (E - E_g) over %d conventional/fvp records: %.3e", checked, worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"exact column", exact_column},
        {"tradeoff curve shape", tradeoff_curve},
        {"mitigation ordering", mitigation_ordering},
        {"LVP undershoot", undershoot},
        {"integrator oracle", integrator_oracle},
        {"single-qubit decay law", analytic_decay},
        {"purification identities", purification_identities},
        {"shadow convergence", shadow_convergence},
        {"variational floor", variational_floor},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %zu (%s): %s [%.1f s] %s\n", k + 1, criteria[k].first, o.pass ? "PASS" : "FAIL",
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
