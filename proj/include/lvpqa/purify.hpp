#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvpqa/model.hpp"
#include "lvpqa/qla.hpp"

namespace lvpqa {

enum class Method { Conventional, Fvp, Lvp, LvpShadow };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct TermContribution {
    int term_index = 0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    /// C_i was empty, so the term was evaluated on the full register.
    bool full_region = false;
    /// Shadow path only: denominator estimate <= 0, term left out of the sum.
    bool failed = false;
};

struct PurifiedEstimate {
    Method method = Method::Lvp;
    int copies = 2;
    std::optional<int> buffer_width;
    double energy = 0.0;
    std::vector<TermContribution> terms;

    bool any_full_region() const;
    int failed_terms() const;
};

/// Tr[H_p rho].
double conventional_energy(const DensityMatrix& rho, const ComplexMatrix& h_p);

/// Tr[rho^n obs] / Tr[rho^n]. Throws NumericalError naming n when the
/// denominator underflows 1e-300.
double fvp_energy(const DensityMatrix& rho, const ComplexMatrix& obs, int n);

/// Termwise purified estimate sum_i Tr[rho_{AB}^n H_i] / Tr[rho_{AB}^n],
/// with rho_{AB} the reduction of rho to A_i u B_i and H_i rebuilt on that
/// register from its Pauli placements.
PurifiedEstimate lvp_energy(const DensityMatrix& rho, const std::vector<LocalTerm>& terms,
                            const std::vector<RegionPartition>& regions, int n);

/// Localized ratio for term i minus its full-register counterpart
/// Tr[rho^n H_i] / Tr[rho^n].
double term_deviation(const DensityMatrix& rho, const LocalTerm& term, const RegionPartition& region, int n);

struct SpectralDiagnostics {
    double dominant_population = 0.0;      // p
    std::vector<double> residual_weights;  // c_k, descending, top-k
    double ground_overlap = 0.0;           // |<Psi_0|E_0>|^2
    bool degenerate_top = false;
};

SpectralDiagnostics spectral_diagnostics(const DensityMatrix& rho, const GroundState& exact, int top_k = 8);
SpectralDiagnostics spectral_diagnostics(const DensityMatrix& rho, const ComplexMatrix& h_p, int top_k = 8);

}  // namespace lvpqa
