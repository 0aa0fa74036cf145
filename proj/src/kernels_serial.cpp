// Reference kernels: direct transcriptions of the index formulas, one output
// element at a time. Kept for validating the OpenMP kernels.

#include "lvpqa/errors.hpp"
#include "lvpqa/kernels.hpp"

namespace lvpqa::serial {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

std::uint64_t scatter(std::uint64_t packed, std::span<const int> qubits, int n_qubits) {
    // bit j of `packed` (MSB-first over the subset) goes to qubit qubits[j]
    std::uint64_t full = 0;
    const int k = static_cast<int>(qubits.size());
    for (int j = 0; j < k; ++j) {
        if ((packed >> (k - 1 - j)) & 1u) full |= qubit_bit(n_qubits, qubits[j]);
    }
    return full;
}

}  // namespace

void add_commutator(const GroupedOperator& h, const ComplexMatrix& rho, ComplexMatrix& out) {
    const auto d = static_cast<std::uint64_t>(h.dim());
    for (std::uint64_t r = 0; r < d; ++r) {
        for (std::uint64_t c = 0; c < d; ++c) {
            Complex acc = 0.0;
            for (const auto& g : h.groups()) {
                // (H rho)(r,c) = H(r, r^x) rho(r^x, c);  (rho H)(r,c) = rho(r, c^x) H(c^x, c)
                acc += g.elems[r] * rho(r ^ g.x_mask, c);
                acc -= rho(r, c ^ g.x_mask) * g.elems[c ^ g.x_mask];
            }
            out(r, c) += kMinusI * acc;
        }
    }
}

void add_pauli_dissipator(const PauliJumps& jumps, double rate, const ComplexMatrix& rho, ComplexMatrix& out) {
    const std::uint64_t d = std::uint64_t{1} << jumps.n_qubits;
    for (const auto& l : jumps.ops) {
        for (std::uint64_t r = 0; r < d; ++r) {
            for (std::uint64_t c = 0; c < d; ++c) {
                // [L,[L,rho]] = 2 rho - 2 L rho L for L^2 = I
                const Complex lrl = l.row_element(r) * rho(r ^ l.x, c ^ l.x) * l.row_element(c ^ l.x);
                out(r, c) += -rate * (rho(r, c) - lrl);
            }
        }
    }
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep) {
    const int n = keep.n_total();
    const QubitSubset traced = keep.complement();
    const std::uint64_t dk = std::uint64_t{1} << keep.size();
    const std::uint64_t dt = std::uint64_t{1} << traced.size();
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (std::uint64_t a = 0; a < dk; ++a) {
        for (std::uint64_t b = 0; b < dk; ++b) {
            Complex acc = 0.0;
            for (std::uint64_t t = 0; t < dt; ++t) {
                const std::uint64_t env = scatter(t, traced.indices(), n);
                acc += m(scatter(a, keep.indices(), n) | env, scatter(b, keep.indices(), n) | env);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

}  // namespace lvpqa::serial
