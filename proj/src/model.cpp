#include "lvpqa/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvpqa/errors.hpp"
#include "lvpqa/rng.hpp"

namespace lvpqa {

void XxzParams::validate() const {
    if (n_qubits < 3) {
        throw ConfigError("periodic XXZ chain needs at least 3 qubits (N=2 double-counts the single edge), got " +
                          std::to_string(n_qubits));
    }
    if (n_qubits > kMaxQubits) throw ConfigError("XXZ chain larger than " + std::to_string(kMaxQubits) + " qubits");
    if (!std::isfinite(coupling) || !std::isfinite(anisotropy) || !std::isfinite(field)) {
        throw ConfigError("XXZ parameters must be finite");
    }
}

DriverParams DriverParams::from_seed(int n_qubits, std::uint64_t seed) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw ConfigError("driver register size out of range");
    DriverParams d;
    d.seed_ = seed;
    d.amplitudes_.resize(n_qubits);
    for (int q = 0; q < n_qubits; ++q) {
        double u = 0.0;
        for (std::uint64_t attempt = 0; u == 0.0; ++attempt) {
            u = rng::keyed_uniform(seed, rng::Stream::DriverAmplitude, static_cast<std::uint64_t>(q), 0, attempt);
        }
        d.amplitudes_[q] = u;
    }
    return d;
}

DriverParams DriverParams::from_amplitudes(std::vector<double> amplitudes) {
    if (amplitudes.empty() || amplitudes.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw ConfigError("driver needs between 1 and " + std::to_string(kMaxQubits) + " amplitudes");
    }
    for (double h : amplitudes) {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw ConfigError("driver amplitudes must be strictly positive (unique |+> ground state)");
        }
    }
    DriverParams d;
    d.amplitudes_ = std::move(amplitudes);
    return d;
}

void AnnealSpec::validate() const {
    problem.validate();
    if (driver.n_qubits() != problem.n_qubits) throw ConfigError("driver and problem register sizes differ");
    if (!(anneal_time > 0.0) || !std::isfinite(anneal_time)) throw ConfigError("anneal time T must be > 0");
    if (!(noise_rate >= 0.0) || !std::isfinite(noise_rate)) throw ConfigError("noise rate must be >= 0");
}

PauliSum local_term_pauli_sum(const XxzParams& p, int i) {
    p.validate();
    if (i < 0 || i >= p.n_qubits) {
        throw ConfigError("local term index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(p.n_qubits) + ")");
    }
    const int j = (i + 1) % p.n_qubits;
    PauliSum h(p.n_qubits);
    h.add(p.coupling, {{i, Axis::X}, {j, Axis::X}});
    h.add(p.coupling, {{i, Axis::Y}, {j, Axis::Y}});
    h.add(p.coupling * p.anisotropy, {{i, Axis::Z}, {j, Axis::Z}});
    h.add(p.field, {{i, Axis::Y}});
    return h;
}

PauliSum problem_pauli_sum(const XxzParams& p) {
    PauliSum h(p.n_qubits);
    for (int i = 0; i < p.n_qubits; ++i) h.append(local_term_pauli_sum(p, i));
    return h;
}

PauliSum driver_pauli_sum(const DriverParams& d) {
    PauliSum h(d.n_qubits());
    for (int q = 0; q < d.n_qubits(); ++q) h.add(-d.amplitudes()[q], {{q, Axis::X}});
    return h;
}

ComplexMatrix build_problem(const XxzParams& p) { return problem_pauli_sum(p).to_dense(); }

LocalTerm build_local_term(const XxzParams& p, int i) {
    LocalTerm t;
    t.index = i;
    t.pauli = local_term_pauli_sum(p, i);
    t.matrix = t.pauli.to_dense();
    t.support = QubitSubset::from_unsorted(p.n_qubits, {i, (i + 1) % p.n_qubits});
    return t;
}

std::vector<LocalTerm> build_local_terms(const XxzParams& p) {
    std::vector<LocalTerm> terms;
    terms.reserve(p.n_qubits);
    for (int i = 0; i < p.n_qubits; ++i) terms.push_back(build_local_term(p, i));
    return terms;
}

ComplexMatrix build_driver(const DriverParams& d) { return driver_pauli_sum(d).to_dense(); }

DensityMatrix initial_state(const DriverParams& d) {
    const int n = d.n_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    const ComplexVector plus = ComplexVector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    return DensityMatrix::pure(n, plus);
}

ScheduleWeights schedule_weights(double t, double anneal_time) {
    if (!(t >= 0.0 && t <= anneal_time)) {
        throw ConfigError("schedule time " + std::to_string(t) + " outside [0, " + std::to_string(anneal_time) + "]");
    }
    const double s = t / anneal_time;
    return ScheduleWeights{s, 1.0 - s};
}

ComplexMatrix schedule_hamiltonian(const AnnealSpec& spec, double t) {
    spec.validate();
    const ScheduleWeights w = schedule_weights(t, spec.anneal_time);
    if (w.problem == 0.0) return build_driver(spec.driver);
    if (w.driver == 0.0) return build_problem(spec.problem);
    return w.problem * build_problem(spec.problem) + w.driver * build_driver(spec.driver);
}

int cycle_distance(int q, int r, int n_qubits) {
    const int diff = std::abs(q - r) % n_qubits;
    return std::min(diff, n_qubits - diff);
}

RegionPartition build_regions(int i, int w, int n_qubits) {
    if (n_qubits < 2 || n_qubits > kMaxQubits) throw ConfigError("region partition needs a chain of >= 2 qubits");
    if (i < 0 || i >= n_qubits) throw ConfigError("region term index " + std::to_string(i) + " out of range");
    if (w < 0) throw ConfigError("buffer width must be >= 0");

    RegionPartition part;
    part.term_index = i;
    part.buffer_width = w;
    const int j = (i + 1) % n_qubits;
    std::vector<int> a{i, j}, b, c;
    for (int q = 0; q < n_qubits; ++q) {
        if (q == i || q == j) continue;
        const int dist = std::min(cycle_distance(q, i, n_qubits), cycle_distance(q, j, n_qubits));
        (dist <= w ? b : c).push_back(q);
    }
    part.a = QubitSubset::from_unsorted(n_qubits, std::move(a));
    part.b = QubitSubset(n_qubits, std::move(b));
    part.c = QubitSubset(n_qubits, std::move(c));
    part.covers_all = part.c.empty();
    return part;
}

std::vector<RegionPartition> build_all_regions(int w, int n_qubits) {
    std::vector<RegionPartition> parts;
    parts.reserve(n_qubits);
    for (int i = 0; i < n_qubits; ++i) parts.push_back(build_regions(i, w, n_qubits));
    return parts;
}

}  // namespace lvpqa
