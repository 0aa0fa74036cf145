#include "lvpqa/pauli.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "lvpqa/errors.hpp"

namespace lvpqa {

namespace {

constexpr Complex kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

}  // namespace

Complex PauliMasks::row_element(std::uint64_t r) const {
    // P |k> = i^{n_y} (-1)^{|k & z|} |k ^ x>, evaluated at k = r ^ x.
    const int sign = std::popcount((r ^ x) & z) & 1;
    const Complex phase = kIPow[n_y & 3];
    return sign ? -phase : phase;
}

PauliMasks pauli_masks(int n_qubits, std::span<const PauliPlacement> placements) {
    PauliMasks m;
    for (const auto& p : placements) {
        if (p.qubit < 0 || p.qubit >= n_qubits) {
            throw ConfigError("Pauli placement on qubit " + std::to_string(p.qubit) + " outside register of " +
                              std::to_string(n_qubits));
        }
        const std::uint64_t bit = qubit_bit(n_qubits, p.qubit);
        if ((m.x | m.z) & bit) throw ConfigError("duplicate qubit " + std::to_string(p.qubit) + " in Pauli product");
        switch (p.axis) {
            case Axis::X: m.x |= bit; break;
            case Axis::Z: m.z |= bit; break;
            case Axis::Y:
                m.x |= bit;
                m.z |= bit;
                ++m.n_y;
                break;
        }
    }
    return m;
}

PauliSum& PauliSum::add(double coeff, std::vector<PauliPlacement> placements) {
    pauli_masks(n_qubits_, placements);  // validates
    terms_.push_back(PauliTerm{coeff, std::move(placements)});
    return *this;
}

PauliSum& PauliSum::append(const PauliSum& other) {
    if (other.n_qubits_ != n_qubits_) throw ConfigError("cannot append Pauli sums on different registers");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

PauliSum PauliSum::scaled(double factor) const {
    PauliSum out = *this;
    for (auto& t : out.terms_) t.coeff *= factor;
    return out;
}

ComplexMatrix PauliSum::to_dense() const {
    const Eigen::Index d = Eigen::Index{1} << n_qubits_;
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto& t : terms_) out += t.coeff * pauli_string(n_qubits_, t.placements);
    return out;
}

QubitSubset PauliSum::support() const {
    std::vector<int> qs;
    for (const auto& t : terms_) {
        for (const auto& p : t.placements) qs.push_back(p.qubit);
    }
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    return QubitSubset(n_qubits_, std::move(qs));
}

PauliSum PauliSum::restricted_to(const QubitSubset& keep) const {
    if (keep.n_total() != n_qubits_) throw ConfigError("restricted_to: subset register size differs");
    PauliSum out(keep.size());
    for (const auto& t : terms_) {
        std::vector<PauliPlacement> mapped;
        mapped.reserve(t.placements.size());
        for (const auto& p : t.placements) {
            const int pos = keep.position_of(p.qubit);
            if (pos < 0) {
                throw ConfigError("restricted_to: term acts on qubit " + std::to_string(p.qubit) +
                                  " outside the kept region");
            }
            mapped.push_back(PauliPlacement{pos, p.axis});
        }
        out.add(t.coeff, std::move(mapped));
    }
    return out;
}

double PauliSum::expectation(const ComplexMatrix& rho) const {
    const std::uint64_t d = std::uint64_t{1} << n_qubits_;
    if (static_cast<std::uint64_t>(rho.rows()) != d) throw ConfigError("PauliSum::expectation: dimension mismatch");
    Complex total = 0.0;
    for (const auto& t : terms_) {
        const PauliMasks m = pauli_masks(n_qubits_, t.placements);
        Complex acc = 0.0;
        for (std::uint64_t r = 0; r < d; ++r) {
            acc += m.row_element(r) * rho(static_cast<Eigen::Index>(r ^ m.x), static_cast<Eigen::Index>(r));
        }
        total += t.coeff * acc;
    }
    return total.real();
}

}  // namespace lvpqa
