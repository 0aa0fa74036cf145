#include <omp.h>

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "lvpqa/kernels.hpp"

namespace lvpqa::omp {

namespace {

// Column-major addressing: element (r, c) lives at c * d + r.

std::vector<std::uint64_t> scatter_table(std::span<const int> qubits, int n_qubits) {
    const int k = static_cast<int>(qubits.size());
    std::vector<std::uint64_t> table(std::size_t{1} << k, 0);
    for (std::uint64_t packed = 0; packed < table.size(); ++packed) {
        std::uint64_t full = 0;
        for (int j = 0; j < k; ++j) {
            if ((packed >> (k - 1 - j)) & 1u) full |= qubit_bit(n_qubits, qubits[j]);
        }
        table[packed] = full;
    }
    return table;
}

}  // namespace

namespace {

// Depolarizing fast path: a qubit carrying all of X, Y and Z collapses to
// sum_P P rho P = 2 Tr_q(rho) (x) I - rho. Other jumps use real sign tables,
// since for Hermitian L, L(r, r^x) L(c^x, c) = (-1)^{n_y} s(r) s(c^x).
struct DissipatorPlan {
    std::vector<std::int64_t> twirled;  // bit of each fully depolarized qubit
    std::vector<std::int64_t> x;
    std::vector<double> col_scale;      // +-rate
    std::vector<std::vector<double>> signs;
    double diag = 0.0;
    double twirl = 0.0;

    DissipatorPlan(const PauliJumps& jumps, double rate) {
        const std::int64_t d = std::int64_t{1} << jumps.n_qubits;
        auto axis_bit = [](const PauliMasks& m) -> std::pair<std::uint64_t, int> {
            const bool single_x = m.x != 0 && (m.x & (m.x - 1)) == 0;
            if (single_x && m.z == 0) return {m.x, 1};
            if (single_x && m.z == m.x) return {m.x, 2};
            if (m.x == 0 && m.z != 0 && (m.z & (m.z - 1)) == 0) return {m.z, 4};
            return {0, 0};
        };
        std::vector<int> seen(jumps.n_qubits, 0);
        for (const auto& m : jumps.ops) {
            const auto [bit, flag] = axis_bit(m);
            if (bit == 0) continue;
            int& s = seen[std::countr_zero(bit)];
            s = (s < 0 || (s & flag)) ? -1 : s | flag;
        }
        std::size_t generic = 0;
        for (const auto& m : jumps.ops) {
            const auto [bit, flag] = axis_bit(m);
            if (bit != 0 && seen[std::countr_zero(bit)] == 7) continue;
            ++generic;
            x.push_back(static_cast<std::int64_t>(m.x));
            col_scale.push_back(m.n_y % 2 ? -rate : rate);
            std::vector<double> sg(d);
            for (std::int64_t r = 0; r < d; ++r) {
                sg[r] = std::popcount((static_cast<std::uint64_t>(r) ^ m.x) & m.z) & 1 ? -1.0 : 1.0;
            }
            signs.push_back(std::move(sg));
        }
        for (int q = 0; q < jumps.n_qubits; ++q) {
            if (seen[q] == 7) twirled.push_back(std::int64_t{1} << q);
        }
        diag = -rate * static_cast<double>(generic + 4 * twirled.size());
        twirl = 2.0 * rate;
    }

    // Rows [0, rows) of column c.
    void apply(const Complex* in, std::int64_t d, std::int64_t c, std::int64_t rows, Complex* oc) const {
        const Complex* rc = in + c * d;
        for (std::int64_t r = 0; r < rows; ++r) oc[r] += diag * rc[r];
        for (const auto b : twirled) {
            const Complex* rcb = in + (c ^ b) * d;
            const std::int64_t cb = c & b;
            for (std::int64_t r = 0; r < rows; ++r) {
                if ((r & b) == cb) oc[r] += twirl * (rc[r] + rcb[r ^ b]);
            }
        }
        for (std::size_t l = 0; l < x.size(); ++l) {
            const std::int64_t xl = x[l];
            const double* sg = signs[l].data();
            const Complex* rcx = in + (c ^ xl) * d;
            const double scol = col_scale[l] * sg[c ^ xl];
            for (std::int64_t r = 0; r < rows; ++r) oc[r] += (scol * sg[r]) * rcx[r ^ xl];
        }
    }
};

// Rows [0, rows) of column c of -i[H, rho].
void commutator_column(const GroupedOperator& h, const Complex* in, std::int64_t d, std::int64_t c, std::int64_t rows,
                       Complex* oc) {
    const Complex* rc = in + c * d;
    for (const auto& g : h.groups()) {
        const auto x = static_cast<std::int64_t>(g.x_mask);
        const Complex* f = g.elems.data();
        const Complex* rcx = in + (c ^ x) * d;
        const double fr = f[c ^ x].real();
        const double fi = f[c ^ x].imag();
        if (x == 0) {
            for (std::int64_t r = 0; r < rows; ++r) {
                // (f[r] - f[c]) * rho(r,c), times -i
                const double ar = f[r].real() - fr;
                const double ai = f[r].imag() - fi;
                const double zr = ar * rc[r].real() - ai * rc[r].imag();
                const double zi = ar * rc[r].imag() + ai * rc[r].real();
                oc[r] += Complex(zi, -zr);
            }
            continue;
        }
        for (std::int64_t r = 0; r < rows; ++r) {
            const Complex& left = rc[r ^ x];
            const Complex& right = rcx[r];
            const double zr =
                f[r].real() * left.real() - f[r].imag() * left.imag() - (right.real() * fr - right.imag() * fi);
            const double zi =
                f[r].real() * left.imag() + f[r].imag() * left.real() - (right.real() * fi + right.imag() * fr);
            oc[r] += Complex(zi, -zr);
        }
    }
}

}  // namespace

void add_commutator(const GroupedOperator& h, const ComplexMatrix& rho, ComplexMatrix& out) {
    const auto d = static_cast<std::int64_t>(h.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < d; ++c) commutator_column(h, rho.data(), d, c, d, out.data() + c * d);
}

void add_pauli_dissipator(const PauliJumps& jumps, double rate, const ComplexMatrix& rho, ComplexMatrix& out) {
    if (jumps.ops.empty() || rate == 0.0) return;
    const std::int64_t d = std::int64_t{1} << jumps.n_qubits;
    const DissipatorPlan plan(jumps, rate);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < d; ++c) plan.apply(rho.data(), d, c, d, out.data() + c * d);
}

void hermitian_rhs(const GroupedOperator& h, const PauliJumps& jumps, double rate, const ComplexMatrix& rho,
                   ComplexMatrix& out) {
    const auto d = static_cast<std::int64_t>(h.dim());
    out.setZero();
    const bool noisy = !jumps.ops.empty() && rate != 0.0;
    const std::optional<DissipatorPlan> plan = noisy ? std::optional<DissipatorPlan>(std::in_place, jumps, rate)
                                                     : std::nullopt;
    const Complex* in = rho.data();
    Complex* dst = out.data();
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t c = 0; c < d; ++c) {
        commutator_column(h, in, d, c, c + 1, dst + c * d);
        if (plan) plan->apply(in, d, c, c + 1, dst + c * d);
    }
    for (std::int64_t c = 0; c < d; ++c) {
        for (std::int64_t r = 0; r < c; ++r) dst[r * d + c] = std::conj(dst[c * d + r]);
        dst[c * d + c] = dst[c * d + c].real();
    }
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const QubitSubset& keep) {
    const int n = keep.n_total();
    const QubitSubset traced = keep.complement();
    const auto keep_idx = scatter_table(keep.indices(), n);
    const auto env_idx = scatter_table(traced.indices(), n);
    const auto dk = static_cast<std::int64_t>(keep_idx.size());
    const auto d = static_cast<std::int64_t>(m.rows());
    ComplexMatrix out(dk, dk);
    const Complex* src = m.data();

#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < dk; ++b) {
        for (std::int64_t a = 0; a < dk; ++a) {
            Complex acc = 0.0;
            const std::uint64_t ra = keep_idx[a];
            const std::uint64_t cb = keep_idx[b];
            for (auto env : env_idx) acc += src[static_cast<std::int64_t>(cb | env) * d + static_cast<std::int64_t>(ra | env)];
            out(a, b) = acc;
        }
    }
    return out;
}

}  // namespace lvpqa::omp
