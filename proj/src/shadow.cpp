#include "lvpqa/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "lvpqa/errors.hpp"
#include "lvpqa/rng.hpp"

namespace lvpqa {

namespace {

constexpr double kBornSumTol = 1e-8;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Local single-qubit states are indexed axis * 2 + bit.
constexpr int kLocalStates = 6;

struct LocalFactors {
    ComplexMatrix inverse[kLocalStates];  // 3 U^dag|b><b|U - I
    ComplexMatrix squared[kLocalStates];  // (3P - I)^2 = 3P + I
};

const LocalFactors& local_factors() {
    static const LocalFactors factors = [] {
        LocalFactors f;
        for (int a = 0; a < 3; ++a) {
            const ComplexMatrix u = basis_rotation(static_cast<Axis>(a));
            for (int b = 0; b < 2; ++b) {
                ComplexVector e = ComplexVector::Zero(2);
                e(b) = 1.0;
                const ComplexVector eig = u.adjoint() * e;
                const ComplexMatrix proj = eig * eig.adjoint();
                f.inverse[a * 2 + b] = 3.0 * proj - ComplexMatrix::Identity(2, 2);
                f.squared[a * 2 + b] = 3.0 * proj + ComplexMatrix::Identity(2, 2);
            }
        }
        return f;
    }();
    return factors;
}

std::uint64_t pattern_code(const ShadowSnapshot& s, std::span<const int> region) {
    std::uint64_t code = 0;
    for (int q : region) code = code * kLocalStates + static_cast<std::uint64_t>(s.bases[q]) * 2 + s.bits[q];
    return code;
}

ComplexMatrix pattern_matrix(std::uint64_t code, int k, bool squared) {
    const auto& f = local_factors();
    std::vector<int> states(k);
    for (int j = k - 1; j >= 0; --j) {
        states[j] = static_cast<int>(code % kLocalStates);
        code /= kLocalStates;
    }
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int s : states) out = kron(out, squared ? f.squared[s] : f.inverse[s]);
    return out;
}

using Histogram = std::map<std::uint64_t, std::uint64_t>;

Histogram histogram(std::span<const ShadowSnapshot> shots, const QubitSubset& region) {
    Histogram h;
    for (const auto& s : shots) ++h[pattern_code(s, region.indices())];
    return h;
}

void check_region(const ShadowEnsemble& ens, const QubitSubset& region) {
    if (region.empty()) throw ConfigError("shadow region must be nonempty");
    if (region.n_total() != ens.n_qubits) throw ConfigError("shadow region register differs from ensemble");
}

// S = sum_a rho_a and Q = sum_a rho_a^2 over a region, with pattern matrices.
struct PairSums {
    ComplexMatrix s;
    ComplexMatrix q;
    std::vector<std::pair<std::uint64_t, ComplexMatrix>> x;   // per pattern rho_a
    std::vector<std::pair<std::uint64_t, ComplexMatrix>> x2;  // per pattern rho_a^2
    std::vector<std::uint64_t> counts;
};

PairSums pair_sums(const Histogram& hist, int k, bool keep_patterns) {
    const Eigen::Index d = Eigen::Index{1} << k;
    PairSums p{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d), {}, {}, {}};
    for (const auto& [code, count] : hist) {
        ComplexMatrix x = pattern_matrix(code, k, false);
        ComplexMatrix x2 = pattern_matrix(code, k, true);
        p.s += static_cast<double>(count) * x;
        p.q += static_cast<double>(count) * x2;
        if (keep_patterns) {
            p.x.emplace_back(code, std::move(x));
            p.x2.emplace_back(code, std::move(x2));
            p.counts.push_back(count);
        }
    }
    return p;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) { return a.cwiseProduct(b.transpose()).sum(); }

struct TermEstimate {
    TermContribution contribution;
    // leave-one-out ratio per pattern code (jackknife), empty if unavailable
    std::map<std::uint64_t, double> loo_ratio;
};

TermEstimate estimate_term(std::span<const ShadowSnapshot> shots, const LocalTerm& term, const RegionPartition& region,
                           bool want_jackknife) {
    const QubitSubset kept = region.kept();
    const int k = kept.size();
    const ComplexMatrix h = term.pauli.restricted_to(kept).to_dense();
    const auto m = static_cast<double>(shots.size());
    const Histogram hist = histogram(shots, kept);
    const PairSums p = pair_sums(hist, k, want_jackknife);

    const ComplexMatrix s2 = p.s * p.s;
    // Unnormalized pair sums over a != b.
    const double num_pairs = trace_product(s2, h).real() - trace_product(p.q, h).real();
    const double den_pairs = s2.trace().real() - p.q.trace().real();

    TermEstimate out;
    auto& c = out.contribution;
    c.term_index = term.index;
    c.full_region = region.covers_all;
    c.numerator = num_pairs / (m * (m - 1.0));
    c.denominator = den_pairs / (m * (m - 1.0));
    if (!(c.denominator > 0.0)) {
        c.failed = true;
        c.ratio = kNaN;
        return out;
    }
    c.ratio = c.numerator / c.denominator;

    if (want_jackknife && shots.size() >= 3) {
        // Removing shot a: S -> S - x, Q -> Q - x^2, so
        // Tr[S'^2 H] - Tr[Q' H] = num - Tr[x (HS + SH)] + 2 Tr[x^2 H]
        const ComplexMatrix g = h * p.s + p.s * h;
        for (std::size_t j = 0; j < p.x.size(); ++j) {
            const auto& x = p.x[j].second;
            const auto& x2 = p.x2[j].second;
            const double num = num_pairs - trace_product(x, g).real() + 2.0 * trace_product(x2, h).real();
            const double den = den_pairs - 2.0 * trace_product(x, p.s).real() + 2.0 * x2.trace().real();
            if (!(den > 0.0)) {
                out.loo_ratio.clear();
                break;
            }
            out.loo_ratio.emplace(p.x[j].first, num / den);
        }
    }
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

void ShadowEnsemble::validate() const {
    if (n_qubits <= 0 || n_qubits > kMaxQubits) throw ConfigError("shadow ensemble register size out of range");
    std::set<std::uint64_t> ids;
    for (const auto& s : snapshots) {
        if (s.n_qubits() != n_qubits || static_cast<int>(s.bits.size()) != n_qubits) {
            throw ConfigError("snapshot " + std::to_string(s.shot_id) + " has the wrong register size");
        }
        if (!ids.insert(s.shot_id).second) throw ConfigError("duplicate shot id " + std::to_string(s.shot_id));
    }
}

ComplexMatrix basis_rotation(Axis axis) {
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix u(2, 2);
    switch (axis) {
        case Axis::Z: u = ComplexMatrix::Identity(2, 2); break;
        case Axis::X: u << r, r, r, -r; break;
        case Axis::Y: u << Complex(r, 0.0), Complex(0.0, -r), Complex(r, 0.0), Complex(0.0, r); break;
    }
    return u;
}

std::vector<double> measurement_distribution(const DensityMatrix& rho, std::span<const Axis> bases) {
    const int n = rho.n_qubits();
    if (static_cast<int>(bases.size()) != n) throw ConfigError("one measurement basis per qubit required");
    ComplexMatrix m = rho.matrix();
    const Eigen::Index d = m.rows();
    for (int q = 0; q < n; ++q) {
        if (bases[q] == Axis::Z) continue;
        const ComplexMatrix u = basis_rotation(bases[q]);
        const Eigen::Index bit = static_cast<Eigen::Index>(qubit_bit(n, q));
        // rows: m -> U m
        for (Eigen::Index c = 0; c < d; ++c) {
            for (Eigen::Index r0 = 0; r0 < d; ++r0) {
                if (r0 & bit) continue;
                const Complex a0 = m(r0, c), a1 = m(r0 | bit, c);
                m(r0, c) = u(0, 0) * a0 + u(0, 1) * a1;
                m(r0 | bit, c) = u(1, 0) * a0 + u(1, 1) * a1;
            }
        }
        // columns: m -> m U^dag
        for (Eigen::Index c0 = 0; c0 < d; ++c0) {
            if (c0 & bit) continue;
            for (Eigen::Index r = 0; r < d; ++r) {
                const Complex a0 = m(r, c0), a1 = m(r, c0 | bit);
                m(r, c0) = a0 * std::conj(u(0, 0)) + a1 * std::conj(u(0, 1));
                m(r, c0 | bit) = a0 * std::conj(u(1, 0)) + a1 * std::conj(u(1, 1));
            }
        }
    }
    std::vector<double> probs(d);
    double total = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        probs[k] = std::max(m(k, k).real(), 0.0);
        total += m(k, k).real();
    }
    if (std::abs(total - 1.0) > kBornSumTol) {
        throw NumericalError("Born probabilities sum to " + std::to_string(total) + "; state corrupted");
    }
    return probs;
}

namespace {

std::vector<Axis> draw_bases(int n, std::uint64_t seed, std::uint64_t shot_id) {
    std::vector<Axis> bases(n);
    for (int q = 0; q < n; ++q) {
        bases[q] = static_cast<Axis>(rng::keyed_below(3, seed, rng::Stream::ShadowBasis, shot_id, static_cast<std::uint64_t>(q)));
    }
    return bases;
}

std::uint64_t basis_code(std::span<const Axis> bases) {
    std::uint64_t code = 0;
    for (Axis a : bases) code = code * 3 + static_cast<std::uint64_t>(a);
    return code;
}

std::vector<double> cumulative(const std::vector<double>& probs) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) cdf[k] = (acc += probs[k]);
    return cdf;
}

ShadowSnapshot finish_snapshot(const std::vector<double>& cdf, std::vector<Axis> bases, std::uint64_t seed,
                               std::uint64_t shot_id) {
    const int n = static_cast<int>(bases.size());
    const double u = rng::keyed_uniform(seed, rng::Stream::ShadowOutcome, shot_id) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto outcome = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
    // skip zero-probability outcomes that upper_bound can land on at the top edge
    while (outcome > 0 && cdf[outcome] == cdf[outcome - 1]) --outcome;

    ShadowSnapshot s;
    s.shot_id = shot_id;
    s.bases = std::move(bases);
    s.bits.resize(n);
    for (int q = 0; q < n; ++q) s.bits[q] = static_cast<std::uint8_t>((outcome >> (n - 1 - q)) & 1u);
    return s;
}

}  // namespace

ShadowSnapshot sample_snapshot(const DensityMatrix& rho, std::uint64_t seed, std::uint64_t shot_id) {
    auto bases = draw_bases(rho.n_qubits(), seed, shot_id);
    return sample_snapshot(rho, seed, shot_id, bases);
}

ShadowSnapshot sample_snapshot(const DensityMatrix& rho, std::uint64_t seed, std::uint64_t shot_id,
                               std::span<const Axis> forced_bases) {
    const auto cdf = cumulative(measurement_distribution(rho, forced_bases));
    return finish_snapshot(cdf, std::vector<Axis>(forced_bases.begin(), forced_bases.end()), seed, shot_id);
}

ShadowSampler::ShadowSampler(DensityMatrix rho) : rho_(std::move(rho)) {}

ShadowEnsemble ShadowSampler::sample(std::size_t shots, std::uint64_t seed, std::uint64_t first_shot_id) {
    const int n = rho_.n_qubits();
    const auto count = static_cast<std::int64_t>(shots);
    std::vector<std::vector<Axis>> bases(shots);
    std::vector<std::uint64_t> codes(shots);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
        bases[k] = draw_bases(n, seed, first_shot_id + static_cast<std::uint64_t>(k));
        codes[k] = basis_code(bases[k]);
    }

    std::vector<std::uint64_t> missing;
    std::vector<std::int64_t> representative;
    {
        std::set<std::uint64_t> seen;
        for (std::int64_t k = 0; k < count; ++k) {
            if (cdf_cache_.count(codes[k]) || !seen.insert(codes[k]).second) continue;
            missing.push_back(codes[k]);
            representative.push_back(k);
        }
    }
    std::vector<std::vector<double>> fresh(missing.size());
    const auto n_missing = static_cast<std::int64_t>(missing.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < n_missing; ++j) {
        fresh[j] = cumulative(measurement_distribution(rho_, bases[representative[j]]));
    }
    for (std::size_t j = 0; j < missing.size(); ++j) cdf_cache_.emplace(missing[j], std::move(fresh[j]));

    ShadowEnsemble ens;
    ens.n_qubits = n;
    ens.seed = seed;
    ens.snapshots.resize(shots);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
        ens.snapshots[k] = finish_snapshot(cdf_cache_.at(codes[k]), std::move(bases[k]), seed,
                                           first_shot_id + static_cast<std::uint64_t>(k));
    }
    return ens;
}

ComplexMatrix snapshot_local_matrix(const ShadowSnapshot& s, const QubitSubset& region) {
    if (region.n_total() != s.n_qubits()) throw ConfigError("region register differs from snapshot");
    if (region.empty()) throw ConfigError("shadow region must be nonempty");
    return pattern_matrix(pattern_code(s, region.indices()), region.size(), false);
}

ComplexMatrix estimate_rdm(const ShadowEnsemble& ens, const QubitSubset& region) {
    check_region(ens, region);
    if (ens.snapshots.empty()) throw ConfigError("estimate_rdm needs at least one snapshot");
    const PairSums p = pair_sums(histogram(ens.snapshots, region), region.size(), false);
    return p.s / static_cast<double>(ens.size());
}

double estimate_purity(const ShadowEnsemble& ens, const QubitSubset& region) {
    check_region(ens, region);
    if (ens.size() < 2) throw ConfigError("estimate_purity needs at least 2 snapshots, got " + std::to_string(ens.size()));
    const PairSums p = pair_sums(histogram(ens.snapshots, region), region.size(), false);
    const auto m = static_cast<double>(ens.size());
    return (p.s.squaredNorm() - p.q.trace().real()) / (m * (m - 1.0));
}

ShadowLvpEstimate shadow_lvp_energy(const ShadowEnsemble& ens, const std::vector<LocalTerm>& terms,
                                    const std::vector<RegionPartition>& regions, const ShadowLvpOptions& opts) {
    if (terms.size() != regions.size()) throw ConfigError("shadow_lvp_energy: terms and regions differ in length");
    if (ens.size() < 2) throw ConfigError("shadow_lvp_energy needs at least 2 snapshots");
    if (opts.batches < 1) throw ConfigError("median-of-means batch count must be >= 1");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (terms[t].index != regions[t].term_index) throw ConfigError("shadow_lvp_energy: term/region misaligned");
        check_region(ens, regions[t].kept());
    }

    ShadowLvpEstimate out;
    out.estimate.method = Method::LvpShadow;
    out.estimate.copies = 2;
    if (!regions.empty()) out.estimate.buffer_width = regions.front().buffer_width;
    out.jackknife_bias = kNaN;
    out.jackknife_stderr = kNaN;

    const std::span<const ShadowSnapshot> all(ens.snapshots);
    const auto n_terms = static_cast<std::int64_t>(terms.size());
    std::vector<TermEstimate> full(terms.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < n_terms; ++t) full[t] = estimate_term(all, terms[t], regions[t], opts.jackknife);

    double energy = 0.0;
    for (const auto& te : full) {
        out.estimate.terms.push_back(te.contribution);
        if (!te.contribution.failed) energy += te.contribution.ratio;
    }

    const bool jackknife_ok = opts.jackknife && ens.size() >= 3 &&
                              std::all_of(full.begin(), full.end(), [](const TermEstimate& te) {
                                  return te.contribution.failed || !te.loo_ratio.empty();
                              });
    if (jackknife_ok) {
        const auto m = static_cast<double>(ens.size());
        std::vector<double> loo(ens.size(), 0.0);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            if (full[t].contribution.failed) continue;
            const QubitSubset kept = regions[t].kept();
            for (std::size_t a = 0; a < ens.size(); ++a) {
                loo[a] += full[t].loo_ratio.at(pattern_code(ens.snapshots[a], kept.indices()));
            }
        }
        double mean = 0.0;
        for (double v : loo) mean += v;
        mean /= m;
        double ss = 0.0;
        for (double v : loo) ss += (v - mean) * (v - mean);
        out.jackknife_bias = (m - 1.0) * (mean - energy);
        out.jackknife_stderr = std::sqrt((m - 1.0) / m * ss);
    }

    if (opts.batches == 1) {
        out.estimate.energy = energy;
        out.batch_energies = {energy};
        return out;
    }
    const std::size_t per_batch = ens.size() / static_cast<std::size_t>(opts.batches);
    if (per_batch < 2) throw ConfigError("too many median-of-means batches for the shot count");
    for (int b = 0; b < opts.batches; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * per_batch;
        const std::size_t len = b + 1 == opts.batches ? ens.size() - begin : per_batch;
        const auto block = all.subspan(begin, len);
        double e = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto te = estimate_term(block, terms[t], regions[t], false);
            if (!te.contribution.failed) e += te.contribution.ratio;
        }
        out.batch_energies.push_back(e);
    }
    out.estimate.energy = median(out.batch_energies);
    return out;
}

void write_snapshots(const ShadowEnsemble& ens, std::ostream& out) {
    for (const auto& s : ens.snapshots) {
        out << s.shot_id << ',';
        for (Axis a : s.bases) out << axis_char(a);
        out << ',';
        for (auto b : s.bits) out << static_cast<char>('0' + b);
        out << '\n';
    }
}

void write_snapshots(const ShadowEnsemble& ens, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open snapshot file for writing: " + path);
    write_snapshots(ens, f);
    if (!f) throw IoError("failed writing snapshot file: " + path);
}

ShadowEnsemble read_snapshots(std::istream& in, std::uint64_t seed) {
    ShadowEnsemble ens;
    ens.seed = seed;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw ConfigError("snapshot line " + std::to_string(line_no) + ": expected 3 fields");
        ShadowSnapshot s;
        try {
            std::size_t used = 0;
            s.shot_id = std::stoull(line.substr(0, c1), &used);
            if (used != c1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("snapshot line " + std::to_string(line_no) + ": bad shot id");
        }
        const std::string basis = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string bits = line.substr(c2 + 1);
        if (basis.size() != bits.size() || basis.empty()) {
            throw ConfigError("snapshot line " + std::to_string(line_no) + ": basis and outcome lengths differ");
        }
        for (char ch : basis) {
            if (ch != 'x' && ch != 'y' && ch != 'z') {
                throw ConfigError("snapshot line " + std::to_string(line_no) + ": basis must be in {x,y,z}");
            }
            s.bases.push_back(axis_from_char(ch));
        }
        for (char ch : bits) {
            if (ch != '0' && ch != '1') {
                throw ConfigError("snapshot line " + std::to_string(line_no) + ": outcome must be in {0,1}");
            }
            s.bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
        if (ens.n_qubits == 0) ens.n_qubits = s.n_qubits();
        ens.snapshots.push_back(std::move(s));
    }
    if (!ens.snapshots.empty()) ens.validate();
    return ens;
}

ShadowEnsemble read_snapshots(const std::string& path, std::uint64_t seed) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open snapshot file: " + path);
    return read_snapshots(f, seed);
}

}  // namespace lvpqa
