#include "lvpqa/qla.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "lvpqa/errors.hpp"
#include "lvpqa/kernels.hpp"

namespace lvpqa {

char axis_char(Axis a) {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

Axis axis_from_char(char c) {
    switch (c) {
        case 'x': case 'X': return Axis::X;
        case 'y': case 'Y': return Axis::Y;
        case 'z': case 'Z': return Axis::Z;
    }
    throw ConfigError(std::string("not a Pauli axis: '") + c + "'");
}

// ---------------------------------------------------------------------------
// QubitSubset

QubitSubset::QubitSubset(int n_total, std::vector<int> indices) : n_total_(n_total), indices_(std::move(indices)) {
    if (n_total_ <= 0 || n_total_ > kMaxQubits) {
        throw ConfigError("register size must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_total_));
    }
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] < 0 || indices_[k] >= n_total_) {
            throw ConfigError("qubit index " + std::to_string(indices_[k]) + " outside register of " +
                              std::to_string(n_total_));
        }
        if (k > 0 && indices_[k] <= indices_[k - 1]) {
            throw ConfigError("qubit subset must be strictly increasing");
        }
    }
}

QubitSubset QubitSubset::from_unsorted(int n_total, std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    return QubitSubset(n_total, std::move(indices));
}

QubitSubset QubitSubset::all(int n_total) {
    std::vector<int> idx(n_total);
    for (int q = 0; q < n_total; ++q) idx[q] = q;
    return QubitSubset(n_total, std::move(idx));
}

bool QubitSubset::contains(int q) const { return position_of(q) >= 0; }

int QubitSubset::position_of(int q) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), q);
    if (it == indices_.end() || *it != q) return -1;
    return static_cast<int>(it - indices_.begin());
}

QubitSubset QubitSubset::complement() const {
    std::vector<int> rest;
    for (int q = 0; q < n_total_; ++q) {
        if (!contains(q)) rest.push_back(q);
    }
    return QubitSubset(n_total_, std::move(rest));
}

QubitSubset QubitSubset::united(const QubitSubset& other) const {
    if (other.n_total_ != n_total_) throw ConfigError("cannot unite subsets of different registers");
    std::vector<int> merged;
    std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                   std::back_inserter(merged));
    return QubitSubset(n_total_, std::move(merged));
}

std::uint64_t QubitSubset::mask() const {
    std::uint64_t m = 0;
    for (int q : indices_) m |= qubit_bit(n_total_, q);
    return m;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int n_qubits, ComplexMatrix matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    if (n_qubits_ <= 0 || n_qubits_ > kMaxQubits) {
        throw ConfigError("density matrix register size out of range: " + std::to_string(n_qubits_));
    }
    const Eigen::Index d = Eigen::Index{1} << n_qubits_;
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw ConfigError("density matrix on " + std::to_string(n_qubits_) + " qubits must be " + std::to_string(d) +
                          "x" + std::to_string(d));
    }
    const double herm = hermitian_deviation(matrix_);
    if (herm > kHermitianTol) {
        throw NumericalError("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    const double tr_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (tr_err > kTraceTol) {
        throw NumericalError("density matrix trace differs from 1 by " + std::to_string(tr_err));
    }
}

DensityMatrix DensityMatrix::pure(int n_qubits, const ComplexVector& psi) {
    return DensityMatrix(n_qubits, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return DensityMatrix(n_qubits, ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

double hermitian_deviation(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void symmetrize(ComplexMatrix& m) {
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    m.swap(h);
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermitian_deviation(m) <= tol; }

// ---------------------------------------------------------------------------
// Construction

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix single_pauli(Axis a) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    switch (a) {
        case Axis::X:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Axis::Y:
            m(0, 1) = Complex(0.0, -1.0);
            m(1, 0) = Complex(0.0, 1.0);
            break;
        case Axis::Z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

ComplexMatrix identity(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return ComplexMatrix::Identity(d, d);
}

ComplexMatrix pauli_string(int n_qubits, std::span<const PauliPlacement> placements) {
    if (n_qubits <= 0 || n_qubits > kMaxQubits) throw ConfigError("pauli_string: register size out of range");
    std::vector<int> axis_at(n_qubits, -1);
    for (const auto& p : placements) {
        if (p.qubit < 0 || p.qubit >= n_qubits) {
            throw ConfigError("pauli_string: qubit " + std::to_string(p.qubit) + " out of range");
        }
        if (axis_at[p.qubit] >= 0) {
            throw ConfigError("pauli_string: duplicate qubit " + std::to_string(p.qubit));
        }
        axis_at[p.qubit] = static_cast<int>(p.axis);
    }
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
    for (int q = 0; q < n_qubits; ++q) {
        out = kron(out, axis_at[q] < 0 ? id2 : single_pauli(static_cast<Axis>(axis_at[q])));
    }
    return out;
}

ComplexMatrix pauli_string(int n_qubits, std::initializer_list<PauliPlacement> placements) {
    return pauli_string(n_qubits, std::span<const PauliPlacement>(placements.begin(), placements.size()));
}

// ---------------------------------------------------------------------------
// Contractions

ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep) {
    if (keep.empty()) throw ConfigError("partial_trace: keep set must be nonempty");
    if (m.rows() != (Eigen::Index{1} << keep.n_total())) {
        throw ConfigError("partial_trace: operator dimension does not match subset register");
    }
    return omp::partial_trace(m, keep);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSubset& keep) {
    if (keep.n_total() != rho.n_qubits()) {
        throw ConfigError("partial_trace: subset register size differs from state");
    }
    ComplexMatrix reduced = partial_trace(rho.matrix(), keep);
    symmetrize(reduced);
    return DensityMatrix(keep.size(), std::move(reduced));
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& obs) {
    if (obs.rows() != rho.dim() || obs.cols() != rho.dim()) {
        throw ConfigError("expectation: observable dimension mismatch");
    }
    // Tr[obs rho] = sum_jk obs(j,k) rho(k,j) = sum of elementwise obs .* rho^T
    const Complex tr = obs.cwiseProduct(rho.matrix().transpose()).sum();
    if (std::abs(tr.imag()) > 1e-6) {
        throw NumericalError("expectation has imaginary part " + std::to_string(tr.imag()) +
                             "; state or observable corrupted");
    }
    return tr.real();
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int n) {
    if (n < 1) throw ConfigError("matrix_power: exponent must be >= 1, got " + std::to_string(n));
    ComplexMatrix result = m;
    for (int k = 1; k < n; ++k) result = result * m;
    return result;
}

ComplexMatrix matrix_power(const DensityMatrix& rho, int n) { return matrix_power(rho.matrix(), n); }

double purity(const DensityMatrix& rho) {
    // Tr[rho^2] = sum |rho_jk|^2 for Hermitian rho
    return rho.matrix().squaredNorm();
}

double min_eigenvalue(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

GroundState ground_state(const ComplexMatrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) throw ConfigError("ground_state: matrix must be square");
    const double dev = hermitian_deviation(h);
    if (dev > 1e-10) {
        throw ConfigError("ground_state: matrix not Hermitian (deviation " + std::to_string(dev) + ")");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("ground_state: eigensolver did not converge");
    return GroundState{es.eigenvalues()(0), es.eigenvectors().col(0)};
}

double ground_state_energy(const ComplexMatrix& h) { return ground_state(h).energy; }

}  // namespace lvpqa
