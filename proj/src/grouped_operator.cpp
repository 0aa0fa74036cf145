#include <algorithm>
#include <string>

#include "lvpqa/errors.hpp"
#include "lvpqa/kernels.hpp"

namespace lvpqa {

namespace {

void accumulate_terms(const PauliSum& sum, std::vector<MaskGroup>& groups) {
    const std::uint64_t d = std::uint64_t{1} << sum.n_qubits();
    for (const auto& t : sum.terms()) {
        const PauliMasks m = pauli_masks(sum.n_qubits(), t.placements);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const MaskGroup& g) { return g.x_mask == m.x; });
        if (it == groups.end()) {
            throw ConfigError("term X-mask " + std::to_string(m.x) + " missing from the operator layout");
        }
        for (std::uint64_t r = 0; r < d; ++r) it->elems[r] += t.coeff * m.row_element(r);
    }
}

std::vector<std::uint64_t> masks_of(const PauliSum& sum) {
    std::vector<std::uint64_t> masks;
    for (const auto& t : sum.terms()) masks.push_back(pauli_masks(sum.n_qubits(), t.placements).x);
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    return masks;
}

}  // namespace

GroupedOperator GroupedOperator::from_pauli_sum(const PauliSum& sum) {
    const auto masks = masks_of(sum);
    return from_pauli_sum(sum, masks);
}

GroupedOperator GroupedOperator::from_pauli_sum(const PauliSum& sum, std::span<const std::uint64_t> masks) {
    GroupedOperator op;
    op.n_qubits_ = sum.n_qubits();
    const std::size_t d = op.dim();
    for (auto m : masks) op.groups_.push_back(MaskGroup{m, std::vector<Complex>(d, Complex(0.0, 0.0))});
    accumulate_terms(sum, op.groups_);
    return op;
}

std::vector<std::uint64_t> GroupedOperator::shared_masks(const PauliSum& a, const PauliSum& b) {
    auto ma = masks_of(a);
    auto mb = masks_of(b);
    std::vector<std::uint64_t> merged;
    std::set_union(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(merged));
    return merged;
}

void GroupedOperator::combine(double a, const GroupedOperator& p, double b, const GroupedOperator& d,
                              GroupedOperator& out) {
    if (p.groups_.size() != d.groups_.size() || p.n_qubits_ != d.n_qubits_) {
        throw ConfigError("GroupedOperator::combine: operators do not share a layout");
    }
    if (out.groups_.size() != p.groups_.size() || out.n_qubits_ != p.n_qubits_) out = p;
    for (std::size_t g = 0; g < p.groups_.size(); ++g) {
        const auto& pe = p.groups_[g].elems;
        const auto& de = d.groups_[g].elems;
        auto& oe = out.groups_[g].elems;
        out.groups_[g].x_mask = p.groups_[g].x_mask;
        for (std::size_t r = 0; r < pe.size(); ++r) oe[r] = a * pe[r] + b * de[r];
    }
}

ComplexMatrix GroupedOperator::to_dense() const {
    const auto d = static_cast<Eigen::Index>(dim());
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto& g : groups_) {
        for (Eigen::Index r = 0; r < d; ++r) out(r, static_cast<Eigen::Index>(r ^ g.x_mask)) += g.elems[r];
    }
    return out;
}

}  // namespace lvpqa
