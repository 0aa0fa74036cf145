#pragma once

#include <cstdint>
#include <vector>

#include "lvpqa/qla.hpp"

namespace lvpqa {

/// Bit masks of a Pauli product P = i^{n_y} X^x Z^z, in register bit order.
struct PauliMasks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int n_y = 0;

    /// P[r, r ^ x], the only nonzero entry of row r.
    Complex row_element(std::uint64_t r) const;
};

/// Rejects duplicate or out-of-range qubits.
PauliMasks pauli_masks(int n_qubits, std::span<const PauliPlacement> placements);

struct PauliTerm {
    double coeff = 0.0;
    std::vector<PauliPlacement> placements;
};

/// Real-weighted sum of Pauli products, hence Hermitian.
class PauliSum {
public:
    explicit PauliSum(int n_qubits = 0) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    PauliSum& add(double coeff, std::vector<PauliPlacement> placements);
    PauliSum& append(const PauliSum& other);
    PauliSum scaled(double factor) const;

    ComplexMatrix to_dense() const;
    /// Qubits touched by at least one term.
    QubitSubset support() const;
    /// Re-expresses the sum on the register formed by `keep`; every placement
    /// must fall inside `keep`.
    PauliSum restricted_to(const QubitSubset& keep) const;

    /// Tr[P rho] using the one-nonzero-per-row structure of Pauli products.
    double expectation(const ComplexMatrix& rho) const;

private:
    int n_qubits_;
    std::vector<PauliTerm> terms_;
};

}  // namespace lvpqa
