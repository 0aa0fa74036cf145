#pragma once

// Data-parallel kernels behind the master-equation right-hand side and the
// partial trace. Each kernel has a plain serial reference (namespace serial)
// and an OpenMP implementation (namespace omp) that production code calls.
// The two are checked against each other in tests and compared in bench/.

#include <cstdint>
#include <vector>

#include "lvpqa/pauli.hpp"
#include "lvpqa/qla.hpp"

namespace lvpqa {

/// A Hermitian operator stored by off-diagonal shift: for each group g,
/// H[r, r ^ x_mask_g] = elems_g[r]. A Pauli sum with k distinct X-masks
/// needs k groups, so H rho costs k * 4^N instead of 8^N.
struct MaskGroup {
    std::uint64_t x_mask = 0;
    std::vector<Complex> elems;
};

class GroupedOperator {
public:
    GroupedOperator() = default;

    static GroupedOperator from_pauli_sum(const PauliSum& sum);
    /// Uses exactly the listed masks, in order; every term's X-mask must
    /// appear. Lets two operators share a layout for linear combination.
    static GroupedOperator from_pauli_sum(const PauliSum& sum, std::span<const std::uint64_t> masks);

    /// Sorted union of the X-masks of both sums.
    static std::vector<std::uint64_t> shared_masks(const PauliSum& a, const PauliSum& b);

    /// out = a * p + b * d; all three must share a layout. Reuses out's storage.
    static void combine(double a, const GroupedOperator& p, double b, const GroupedOperator& d, GroupedOperator& out);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return std::size_t{1} << n_qubits_; }
    const std::vector<MaskGroup>& groups() const { return groups_; }

    ComplexMatrix to_dense() const;

private:
    int n_qubits_ = 0;
    std::vector<MaskGroup> groups_;
};

/// Hermitian involutive jump operators (single-qubit Paulis in practice),
/// each entering the generator as -(rate/2) [L, [L, rho]].
struct PauliJumps {
    int n_qubits = 0;
    std::vector<PauliMasks> ops;
};

namespace serial {

/// out += -i [H, rho]
void add_commutator(const GroupedOperator& h, const ComplexMatrix& rho, ComplexMatrix& out);
/// out += -(rate/2) sum_L [L, [L, rho]]
void add_pauli_dissipator(const PauliJumps& jumps, double rate, const ComplexMatrix& rho, ComplexMatrix& out);
ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep);

}  // namespace serial

namespace omp {

void add_commutator(const GroupedOperator& h, const ComplexMatrix& rho, ComplexMatrix& out);
void add_pauli_dissipator(const PauliJumps& jumps, double rate, const ComplexMatrix& rho, ComplexMatrix& out);
/// out = -i[H, rho] - (rate/2) sum_L [L, [L, rho]] for Hermitian rho. Only the
/// upper triangle is computed; the rest is mirrored.
void hermitian_rhs(const GroupedOperator& h, const PauliJumps& jumps, double rate, const ComplexMatrix& rho,
                   ComplexMatrix& out);
ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep);

}  // namespace omp

}  // namespace lvpqa
