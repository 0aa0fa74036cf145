#include "lvpqa/purify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <Eigen/Eigenvalues>

#include "lvpqa/errors.hpp"

namespace lvpqa {

namespace {

constexpr double kUnderflowGuard = 1e-300;
constexpr double kDegeneracyGap = 1e-10;

// Tr[a b] without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) { return a.cwiseProduct(b.transpose()).sum(); }

TermContribution evaluate_term(const ComplexMatrix& rho, const LocalTerm& term, const RegionPartition& region, int n) {
    if (term.index != region.term_index) {
        throw ConfigError("local term " + std::to_string(term.index) + " paired with region for term " +
                          std::to_string(region.term_index));
    }
    const QubitSubset kept = region.kept();
    ComplexMatrix reduced = kept.size() == kept.n_total() ? rho : partial_trace(rho, kept);
    symmetrize(reduced);
    const ComplexMatrix powered = matrix_power(reduced, n);
    const ComplexMatrix h_local = term.pauli.restricted_to(kept).to_dense();

    TermContribution c;
    c.term_index = term.index;
    c.full_region = region.covers_all;
    c.numerator = trace_product(powered, h_local).real();
    c.denominator = powered.trace().real();
    if (!(c.denominator > kUnderflowGuard)) {
        throw NumericalError("localized purification denominator underflow for term " + std::to_string(term.index) +
                             " at copy number " + std::to_string(n));
    }
    c.ratio = c.numerator / c.denominator;
    return c;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Conventional: return "conventional";
        case Method::Fvp: return "fvp";
        case Method::Lvp: return "lvp";
        case Method::LvpShadow: return "lvp-shadow";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "conventional") return Method::Conventional;
    if (name == "fvp") return Method::Fvp;
    if (name == "lvp") return Method::Lvp;
    if (name == "lvp-shadow") return Method::LvpShadow;
    throw ConfigError("unknown method '" + name + "' (expected conventional, fvp, lvp or lvp-shadow)");
}

bool PurifiedEstimate::any_full_region() const {
    return std::any_of(terms.begin(), terms.end(), [](const TermContribution& t) { return t.full_region; });
}

int PurifiedEstimate::failed_terms() const {
    return static_cast<int>(std::count_if(terms.begin(), terms.end(), [](const TermContribution& t) { return t.failed; }));
}

double conventional_energy(const DensityMatrix& rho, const ComplexMatrix& h_p) { return expectation(rho, h_p); }

double fvp_energy(const DensityMatrix& rho, const ComplexMatrix& obs, int n) {
    if (obs.rows() != rho.dim()) throw ConfigError("fvp_energy: observable dimension mismatch");
    const ComplexMatrix powered = matrix_power(rho, n);
    const double den = powered.trace().real();
    if (!(den > kUnderflowGuard)) {
        throw NumericalError("Tr[rho^n] underflow at copy number n=" + std::to_string(n));
    }
    return trace_product(powered, obs).real() / den;
}

PurifiedEstimate lvp_energy(const DensityMatrix& rho, const std::vector<LocalTerm>& terms,
                            const std::vector<RegionPartition>& regions, int n) {
    if (n < 1) throw ConfigError("copy number must be >= 1");
    if (terms.size() != regions.size()) throw ConfigError("lvp_energy: terms and regions differ in length");

    PurifiedEstimate est;
    est.method = Method::Lvp;
    est.copies = n;
    if (!regions.empty()) est.buffer_width = regions.front().buffer_width;
    est.terms.resize(terms.size());

    const auto count = static_cast<std::int64_t>(terms.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < count; ++k) {
        try {
            est.terms[k] = evaluate_term(rho.matrix(), terms[k], regions[k], n);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    for (const auto& t : est.terms) est.energy += t.ratio;
    return est;
}

double term_deviation(const DensityMatrix& rho, const LocalTerm& term, const RegionPartition& region, int n) {
    const TermContribution local = evaluate_term(rho.matrix(), term, region, n);
    return local.ratio - fvp_energy(rho, term.matrix, n);
}

SpectralDiagnostics spectral_diagnostics(const DensityMatrix& rho, const GroundState& exact, int top_k) {
    if (exact.vector.size() != rho.dim()) throw ConfigError("spectral_diagnostics: ground state dimension mismatch");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("spectral_diagnostics: eigensolver did not converge");
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();
    const Eigen::Index d = evals.size();

    SpectralDiagnostics out;
    out.dominant_population = evals(d - 1);
    out.degenerate_top = d > 1 && (evals(d - 1) - evals(d - 2)) < kDegeneracyGap;

    // Best overlap among eigenvectors tied with the top eigenvalue; ascending
    // eigenvalue order from the solver makes this deterministic.
    for (Eigen::Index k = d - 1; k >= 0 && evals(d - 1) - evals(k) < kDegeneracyGap; --k) {
        out.ground_overlap = std::max(out.ground_overlap, std::norm(evecs.col(k).dot(exact.vector)));
    }
    out.ground_overlap = std::min(out.ground_overlap, 1.0);

    const double rest = 1.0 - out.dominant_population;
    if (rest > 1e-15) {
        for (Eigen::Index k = d - 2; k >= 0 && static_cast<int>(out.residual_weights.size()) < top_k; --k) {
            out.residual_weights.push_back(std::max(evals(k), 0.0) / rest);
        }
    }
    return out;
}

SpectralDiagnostics spectral_diagnostics(const DensityMatrix& rho, const ComplexMatrix& h_p, int top_k) {
    return spectral_diagnostics(rho, ground_state(h_p), top_k);
}

}  // namespace lvpqa
