#include "lvpqa/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "lvpqa/errors.hpp"

namespace lvpqa {

namespace {

constexpr double kTraceDriftLimit = 1e-6;
constexpr double kNegativityLimit = -1e-5;
constexpr double kStepHermitianLimit = 1e-10;
constexpr double kCleanupLimit = 1e-8;

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string at_time(double t) { return " at t=" + fmt_g(t) + " (step size too large?)"; }

}  // namespace

NoiseSpec NoiseSpec::depolarizing(int n_qubits, double rate) {
    NoiseSpec spec;
    spec.rate = rate;
    for (int q = 0; q < n_qubits; ++q) {
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) spec.jumps.push_back(PauliPlacement{q, a});
    }
    return spec;
}

void NoiseSpec::validate(int n_qubits) const {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ConfigError("noise rate must be >= 0");
    for (const auto& j : jumps) {
        if (j.qubit < 0 || j.qubit >= n_qubits) {
            throw ConfigError("jump operator on qubit " + std::to_string(j.qubit) + " outside register");
        }
    }
}

PauliJumps NoiseSpec::to_jumps(int n_qubits) const {
    validate(n_qubits);
    PauliJumps out;
    out.n_qubits = n_qubits;
    for (const auto& j : jumps) {
        const PauliPlacement p[1] = {j};
        out.ops.push_back(pauli_masks(n_qubits, p));
    }
    return out;
}

double IntegratorConfig::default_dt(double anneal_time) { return std::min(0.005, anneal_time / 2000.0); }

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h, const NoiseSpec& noise) {
    if (rho.rows() != h.rows() || rho.cols() != h.cols() || rho.rows() != rho.cols()) {
        throw ConfigError("lindblad_rhs: state and Hamiltonian dimensions differ");
    }
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
    noise.validate(n);
    const Complex minus_i(0.0, -1.0);
    ComplexMatrix out = minus_i * (h * rho - rho * h);
    for (const auto& j : noise.jumps) {
        const ComplexMatrix l = pauli_string(n, {j});
        const ComplexMatrix inner = l * rho - rho * l;
        out -= 0.5 * noise.rate * (l * inner - inner * l);
    }
    return out;
}

ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h, const NoiseSpec& noise) {
    return lindblad_rhs(rho.matrix(), h, noise);
}

EvolveResult evolve_schedule(const DensityMatrix& rho0, const LinearSchedule& schedule, const NoiseSpec& noise,
                             const IntegratorConfig& cfg) {
    const int n = rho0.n_qubits();
    const double T = schedule.anneal_time;
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("anneal time must be > 0");
    if (schedule.problem.n_qubits() != n || schedule.driver.n_qubits() != n) {
        throw ConfigError("schedule Hamiltonians and initial state live on different registers");
    }
    const double requested_dt = cfg.dt > 0.0 ? cfg.dt : IntegratorConfig::default_dt(T);
    if (cfg.dt < 0.0 || requested_dt > T) throw ConfigError("integrator step must satisfy 0 < dt <= T");
    if (cfg.record_stride < 0) throw ConfigError("record stride must be >= 0");

    // Land exactly on T with a uniform step no larger than requested.
    const auto steps = static_cast<std::int64_t>(std::ceil(T / requested_dt - 1e-9));
    const double dt = T / static_cast<double>(steps);

    const auto masks = GroupedOperator::shared_masks(schedule.problem, schedule.driver);
    const GroupedOperator hp = GroupedOperator::from_pauli_sum(schedule.problem, masks);
    const GroupedOperator hd = GroupedOperator::from_pauli_sum(schedule.driver, masks);
    GroupedOperator h_t = hp;
    const PauliJumps jumps = noise.to_jumps(n);

    auto rhs = [&](double t, const ComplexMatrix& rho, ComplexMatrix& out) {
        const double s = std::clamp(t / T, 0.0, 1.0);
        GroupedOperator::combine(s, hp, 1.0 - s, hd, h_t);
        omp::hermitian_rhs(h_t, jumps, noise.rate, rho, out);
    };

    const Eigen::Index d = rho0.dim();
    ComplexMatrix rho = rho0.matrix();
    ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);

    EvolveResult result{rho0, {}, {}};
    result.meta.dt = dt;
    result.meta.steps = steps;

    auto record = [&](double t) {
        const double s = std::clamp(t / T, 0.0, 1.0);
        const double tr = rho.trace().real();
        const double energy = s * schedule.problem.expectation(rho) + (1.0 - s) * schedule.driver.expectation(rho);
        result.trajectory.push_back(TrajectoryPoint{t, tr, rho.squaredNorm(), energy});
        if (std::abs(tr - 1.0) > kTraceDriftLimit) throw NumericalError("integration diverged: trace drift" + at_time(t));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < kNegativityLimit) {
            throw NumericalError("integration diverged: eigenvalue " + fmt_g(es.eigenvalues()(0)) + at_time(t));
        }
    };

    if (cfg.record_stride > 0) record(0.0);
    for (std::int64_t step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        rhs(t, rho, k1);
        stage = rho + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, stage, k2);
        stage = rho + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, stage, k3);
        stage = rho + dt * k3;
        rhs(t + dt, stage, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double herm = hermitian_deviation(rho);
        result.meta.max_step_hermitian_deviation = std::max(result.meta.max_step_hermitian_deviation, herm);
        if (!(herm <= kStepHermitianLimit)) {
            throw NumericalError("integration diverged: Hermiticity loss " + fmt_g(herm) + at_time(t + dt));
        }
        symmetrize(rho);
        const double drift = std::abs(rho.trace().real() - 1.0);
        if (!(drift <= kTraceDriftLimit)) throw NumericalError("integration diverged: trace drift" + at_time(t + dt));

        if (cfg.record_stride > 0 && ((step + 1) % cfg.record_stride == 0) && step + 1 != steps) record(t + dt);
    }
    if (cfg.record_stride > 0) record(T);

    // End-of-run cleanup: symmetrize, then renormalize.
    result.meta.final_symmetrize_delta = hermitian_deviation(rho) / 2.0;
    symmetrize(rho);
    const double tr = rho.trace().real();
    result.meta.final_trace_delta = std::abs(tr - 1.0);
    if (result.meta.final_symmetrize_delta >= kCleanupLimit || result.meta.final_trace_delta >= kCleanupLimit) {
        throw NumericalError("end-of-run correction too large (symmetrize " + fmt_g(result.meta.final_symmetrize_delta) +
                             ", trace " + fmt_g(result.meta.final_trace_delta) + ")");
    }
    rho /= tr;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    result.meta.min_eigenvalue = es.eigenvalues()(0);
    if (result.meta.min_eigenvalue < kNegativityLimit) {
        throw NumericalError("integration diverged: final eigenvalue " + fmt_g(result.meta.min_eigenvalue));
    }
    result.state = DensityMatrix(n, std::move(rho));
    return result;
}

EvolveResult evolve(const AnnealSpec& spec, const IntegratorConfig& cfg) {
    spec.validate();
    const LinearSchedule schedule{problem_pauli_sum(spec.problem), driver_pauli_sum(spec.driver), spec.anneal_time};
    return evolve_schedule(initial_state(spec.driver), schedule, NoiseSpec::depolarizing(spec.problem.n_qubits,
                                                                                         spec.noise_rate),
                           cfg);
}

void write_trajectory_csv(const std::vector<TrajectoryPoint>& points, std::ostream& out) {
    out << "t,trace,purity,energy\n";
    for (const auto& p : points) {
        out << fmt_g(p.t) << ',' << fmt_g(p.trace) << ',' << fmt_g(p.purity) << ',' << fmt_g(p.energy) << '\n';
    }
}

void write_trajectory_csv(const std::vector<TrajectoryPoint>& points, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open trajectory file for writing: " + path);
    write_trajectory_csv(points, f);
    if (!f) throw IoError("failed writing trajectory file: " + path);
}

}  // namespace lvpqa
