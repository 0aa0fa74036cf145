#pragma once

// Randomized Pauli-basis classical shadows.
//
// Basis changes applied before a computational-basis readout:
//   z: identity
//   x: H       = 1/sqrt2 [[1,  1], [1, -1]]
//   y: H S^dag = 1/sqrt2 [[1, -i], [1,  i]]
// Outcome bit b in basis U corresponds to the eigenstate U^dag |b>, and the
// single-qubit inverse channel gives 3 U^dag |b><b| U - I.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lvpqa/model.hpp"
#include "lvpqa/purify.hpp"
#include "lvpqa/qla.hpp"

namespace lvpqa {

struct ShadowSnapshot {
    std::uint64_t shot_id = 0;
    std::vector<Axis> bases;
    std::vector<std::uint8_t> bits;

    int n_qubits() const { return static_cast<int>(bases.size()); }
    bool operator==(const ShadowSnapshot&) const = default;
};

struct ShadowEnsemble {
    int n_qubits = 0;
    std::uint64_t seed = 0;
    std::vector<ShadowSnapshot> snapshots;

    std::size_t size() const { return snapshots.size(); }
    /// Checks register sizes and shot-id uniqueness.
    void validate() const;
};

/// Single-qubit basis change matrix for `axis`.
ComplexMatrix basis_rotation(Axis axis);

/// Born probabilities of every outcome string after rotating each qubit q
/// into bases[q]. Throws NumericalError if they do not sum to 1 within 1e-8.
std::vector<double> measurement_distribution(const DensityMatrix& rho, std::span<const Axis> bases);

/// One randomized shot. Bases come from the (seed, shot_id, qubit) stream and
/// the outcome from the (seed, shot_id) stream.
ShadowSnapshot sample_snapshot(const DensityMatrix& rho, std::uint64_t seed, std::uint64_t shot_id);
/// Same, with bases fixed by the caller.
ShadowSnapshot sample_snapshot(const DensityMatrix& rho, std::uint64_t seed, std::uint64_t shot_id,
                               std::span<const Axis> forced_bases);

/// Draws many shots from one state, caching the outcome distribution per basis
/// setting. Produces exactly the snapshots sample_snapshot would.
class ShadowSampler {
public:
    explicit ShadowSampler(DensityMatrix rho);

    ShadowEnsemble sample(std::size_t shots, std::uint64_t seed, std::uint64_t first_shot_id = 0);

    std::size_t cached_settings() const { return cdf_cache_.size(); }

private:
    DensityMatrix rho_;
    // cumulative outcome distribution keyed by base-3 basis code
    std::map<std::uint64_t, std::vector<double>> cdf_cache_;
};

/// Tensor product over `region` (ascending qubit order) of 3 U^dag|b><b|U - I.
ComplexMatrix snapshot_local_matrix(const ShadowSnapshot& s, const QubitSubset& region);

/// Mean of the local snapshot matrices.
ComplexMatrix estimate_rdm(const ShadowEnsemble& ens, const QubitSubset& region);

/// Unbiased pair U-statistic for Tr[rho_region^2]. Requires >= 2 snapshots.
double estimate_purity(const ShadowEnsemble& ens, const QubitSubset& region);

struct ShadowLvpOptions {
    /// Median-of-means batch count over contiguous shot blocks.
    int batches = 1;
    bool jackknife = true;
};

struct ShadowLvpEstimate {
    PurifiedEstimate estimate;  // method LvpShadow, copies 2
    /// Jackknife bias of the summed ratio estimator, (M-1)(mean_loo - full);
    /// NaN when unavailable (M < 3 or disabled).
    double jackknife_bias;
    double jackknife_stderr;
    std::vector<double> batch_energies;
};

/// Localized purification at n = 2 from shadows: per term, numerator and
/// denominator are pair U-statistics over distinct snapshots restricted to
/// A_i u B_i.
ShadowLvpEstimate shadow_lvp_energy(const ShadowEnsemble& ens, const std::vector<LocalTerm>& terms,
                                    const std::vector<RegionPartition>& regions, const ShadowLvpOptions& opts = {});

/// Text records "shot_id,bases,bits", one per line, e.g. "42,zxy,101".
void write_snapshots(const ShadowEnsemble& ens, std::ostream& out);
void write_snapshots(const ShadowEnsemble& ens, const std::string& path);
ShadowEnsemble read_snapshots(std::istream& in, std::uint64_t seed = 0);
ShadowEnsemble read_snapshots(const std::string& path, std::uint64_t seed = 0);

}  // namespace lvpqa
