#pragma once

#include <cstdint>
#include <vector>

#include "lvpqa/pauli.hpp"
#include "lvpqa/qla.hpp"

namespace lvpqa {

/// Periodic XXZ chain with a uniform y-field:
///   H_p = J sum_i (X_i X_{i+1} + Y_i Y_{i+1} + delta Z_i Z_{i+1}) + h sum_i Y_i
struct XxzParams {
    int n_qubits = 6;
    double coupling = -1.0;    // J
    double anisotropy = -0.73; // delta
    double field = 1.0;        // h

    void validate() const;
};

/// Random transverse-field driver H_d = -sum_i h_i X_i with h_i in (0, 1).
class DriverParams {
public:
    /// Draws h_i ~ Uniform(0,1) from a counter-based stream keyed by
    /// (seed, qubit); exact zeros are redrawn.
    static DriverParams from_seed(int n_qubits, std::uint64_t seed);
    /// Explicit amplitudes; each must be strictly positive.
    static DriverParams from_amplitudes(std::vector<double> amplitudes);

    int n_qubits() const { return static_cast<int>(amplitudes_.size()); }
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<double> amplitudes_;
    std::uint64_t seed_ = 0;
};

struct AnnealSpec {
    XxzParams problem;
    DriverParams driver;
    double anneal_time = 10.0;  // T
    double noise_rate = 0.0;    // lambda

    void validate() const;
};

struct LocalTerm {
    int index = 0;
    PauliSum pauli;          // Pauli placements on the full register
    ComplexMatrix matrix;    // dense 2^N embedding of `pauli`
    QubitSubset support;     // {i, (i+1) mod N}
};

/// Index sets for one local term: A = support, B = buffer of width w, C = rest.
struct RegionPartition {
    int term_index = 0;
    int buffer_width = 0;
    QubitSubset a;
    QubitSubset b;
    QubitSubset c;
    /// Set when A and B already cover the whole chain (C empty); LVP then
    /// coincides with FVP for this term.
    bool covers_all = false;

    QubitSubset kept() const { return a.united(b); }
};

PauliSum problem_pauli_sum(const XxzParams& p);
PauliSum driver_pauli_sum(const DriverParams& d);
PauliSum local_term_pauli_sum(const XxzParams& p, int i);

ComplexMatrix build_problem(const XxzParams& p);
LocalTerm build_local_term(const XxzParams& p, int i);
std::vector<LocalTerm> build_local_terms(const XxzParams& p);
ComplexMatrix build_driver(const DriverParams& d);

/// Projector onto |+>^N, the driver ground state.
DensityMatrix initial_state(const DriverParams& d);

/// Annealing coefficients A(t) = t/T, B(t) = 1 - t/T.
struct ScheduleWeights {
    double problem;
    double driver;
};
ScheduleWeights schedule_weights(double t, double anneal_time);

/// H(t) = (t/T) H_p + (1 - t/T) H_d; rejects t outside [0, T].
ComplexMatrix schedule_hamiltonian(const AnnealSpec& spec, double t);

/// Shortest distance between qubits q and r on the N-cycle.
int cycle_distance(int q, int r, int n_qubits);

RegionPartition build_regions(int i, int w, int n_qubits);
std::vector<RegionPartition> build_all_regions(int w, int n_qubits);

}  // namespace lvpqa
