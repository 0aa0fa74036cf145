#pragma once

// Dense complex linear algebra on qubit registers.
//
// Basis convention shared by every module: qubit 0 is the most significant
// bit of a computational-basis index, so for N qubits qubit q lives at bit
// position N - 1 - q.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lvpqa {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 14;

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

char axis_char(Axis a);
Axis axis_from_char(char c);

struct PauliPlacement {
    int qubit;
    Axis axis;
};

inline std::uint64_t qubit_bit(int n_qubits, int qubit) {
    return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

/// Ordered set of distinct qubit indices within an N-qubit register.
class QubitSubset {
public:
    QubitSubset() = default;
    /// Requires strictly increasing indices, each below n_total.
    QubitSubset(int n_total, std::vector<int> indices);

    /// Sorts the input; still rejects duplicates and out-of-range indices.
    static QubitSubset from_unsorted(int n_total, std::vector<int> indices);
    static QubitSubset all(int n_total);

    int n_total() const { return n_total_; }
    std::span<const int> indices() const { return indices_; }
    int size() const { return static_cast<int>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    bool contains(int q) const;
    /// Position of qubit q within the subset, or -1.
    int position_of(int q) const;
    QubitSubset complement() const;
    QubitSubset united(const QubitSubset& other) const;
    /// Bitmask over the full register.
    std::uint64_t mask() const;

    bool operator==(const QubitSubset&) const = default;

private:
    int n_total_ = 0;
    std::vector<int> indices_;
};

/// Unit-trace Hermitian state on n qubits. Construction validates
/// Hermiticity (1e-10) and trace (1e-8); positivity is checked on demand via
/// min_eigenvalue because it needs a diagonalization.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-8;

    DensityMatrix(int n_qubits, ComplexMatrix matrix);

    /// |psi><psi| for a normalized state vector.
    static DensityMatrix pure(int n_qubits, const ComplexVector& psi);
    static DensityMatrix maximally_mixed(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }

private:
    int n_qubits_;
    ComplexMatrix matrix_;
};

double hermitian_deviation(const ComplexMatrix& m);
void symmetrize(ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix single_pauli(Axis a);
ComplexMatrix identity(int n_qubits);

/// Pauli product on n qubits with identity on unlisted qubits.
ComplexMatrix pauli_string(int n_qubits, std::span<const PauliPlacement> placements);
ComplexMatrix pauli_string(int n_qubits, std::initializer_list<PauliPlacement> placements);

/// Reduced state on `keep`, with qubits ordered by ascending original index.
DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSubset& keep);
/// Same contraction for an arbitrary (not necessarily physical) operator.
ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep);

/// Tr[obs rho]; throws NumericalError if the imaginary part exceeds 1e-6.
double expectation(const DensityMatrix& rho, const ComplexMatrix& obs);

ComplexMatrix matrix_power(const ComplexMatrix& m, int n);
ComplexMatrix matrix_power(const DensityMatrix& rho, int n);

double purity(const DensityMatrix& rho);
double min_eigenvalue(const DensityMatrix& rho);

struct GroundState {
    double energy;
    ComplexVector vector;
};

/// Lowest eigenpair of a Hermitian matrix. Rejects deviation above 1e-10.
GroundState ground_state(const ComplexMatrix& h);
double ground_state_energy(const ComplexMatrix& h);

}  // namespace lvpqa
