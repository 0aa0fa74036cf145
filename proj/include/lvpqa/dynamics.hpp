#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lvpqa/kernels.hpp"
#include "lvpqa/model.hpp"
#include "lvpqa/qla.hpp"

namespace lvpqa {

/// Pauli jump operators sharing one rate. Each L enters the generator as
/// -(rate/2) [L, [L, rho]], the GKSL dissipator for Hermitian involutive L.
struct NoiseSpec {
    double rate = 0.0;
    std::vector<PauliPlacement> jumps;

    /// X, Y and Z on every qubit.
    static NoiseSpec depolarizing(int n_qubits, double rate);

    void validate(int n_qubits) const;
    PauliJumps to_jumps(int n_qubits) const;
};

struct IntegratorConfig {
    /// Step size; 0 selects default_dt(T).
    double dt = 0.0;
    /// Record a trajectory point every `record_stride` steps (0 = final point only).
    int record_stride = 0;

    static double default_dt(double anneal_time);
};

struct TrajectoryPoint {
    double t;
    double trace;
    double purity;
    double energy;  // Tr[H(t) rho(t)]
};

struct EvolveMetadata {
    double dt = 0.0;
    std::int64_t steps = 0;
    double max_step_hermitian_deviation = 0.0;
    double final_symmetrize_delta = 0.0;
    double final_trace_delta = 0.0;
    double min_eigenvalue = 0.0;
};

struct EvolveResult {
    DensityMatrix state;
    EvolveMetadata meta;
    std::vector<TrajectoryPoint> trajectory;
};

/// H(t) = (t/T) problem + (1 - t/T) driver. Passing the same sum twice gives
/// a time-independent Hamiltonian.
struct LinearSchedule {
    PauliSum problem;
    PauliSum driver;
    double anneal_time = 1.0;
};

/// Dense GKSL generator -i[H, rho] - (rate/2) sum_L [L, [L, rho]], built from
/// explicit matrix products. The integrator uses the structured kernels
/// instead; this is the reference they are tested against.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h, const NoiseSpec& noise);
ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h, const NoiseSpec& noise);

/// Fixed-step RK4 from rho0 over [0, T]. Throws NumericalError on trace
/// drift > 1e-6, eigenvalues below -1e-5, per-step Hermiticity loss > 1e-10,
/// or end-of-run corrections >= 1e-8.
EvolveResult evolve_schedule(const DensityMatrix& rho0, const LinearSchedule& schedule, const NoiseSpec& noise,
                             const IntegratorConfig& cfg);

/// Anneal from the driver ground state under depolarizing noise at spec.noise_rate.
EvolveResult evolve(const AnnealSpec& spec, const IntegratorConfig& cfg);

void write_trajectory_csv(const std::vector<TrajectoryPoint>& points, std::ostream& out);
void write_trajectory_csv(const std::vector<TrajectoryPoint>& points, const std::string& path);

}  // namespace lvpqa
