#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lvpqa/errors.hpp"
#include "lvpqa/model.hpp"
#include "lvpqa/purify.hpp"
#include "lvpqa/shadow.hpp"
#include "oracles.hpp"

using namespace lvpqa;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrix basis_state(int n, int index) {
    ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << n);
    psi(index) = 1.0;
    return DensityMatrix::pure(n, psi);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

LocalTerm single_z_term(int n, int q) {
    LocalTerm t;
    t.index = 0;
    t.pauli = PauliSum(n);
    t.pauli.add(1.0, {{q, Axis::Z}});
    t.matrix = t.pauli.to_dense();
    t.support = QubitSubset(n, {q});
    return t;
}

}  // namespace

TEST(LocalMatrix, Examples) {
    const ShadowSnapshot z0{0, {Axis::Z}, {0}};
    const ComplexMatrix mz = snapshot_local_matrix(z0, QubitSubset::all(1));
    EXPECT_LT(max_abs(mz - ComplexMatrix(Eigen::Vector2cd(2.0, -1.0).asDiagonal())), 1e-15);

    const ShadowSnapshot x0{0, {Axis::X}, {0}};
    ComplexMatrix expected(2, 2);
    expected << 0.5, 1.5, 1.5, 0.5;
    EXPECT_LT(max_abs(snapshot_local_matrix(x0, QubitSubset::all(1)) - expected), 1e-15);

    // y outcome 0 is |+i>: 3|+i><+i| - I
    const ShadowSnapshot y0{0, {Axis::Y}, {0}};
    ComplexMatrix ey(2, 2);
    ey << 0.5, Complex(0, -1.5), Complex(0, 1.5), 0.5;
    EXPECT_LT(max_abs(snapshot_local_matrix(y0, QubitSubset::all(1)) - ey), 1e-15);

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> axis(0, 2), bit(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        ShadowSnapshot s;
        for (int q = 0; q < 4; ++q) {
            s.bases.push_back(Axis(axis(rng)));
            s.bits.push_back(static_cast<std::uint8_t>(bit(rng)));
        }
        const ComplexMatrix m = snapshot_local_matrix(s, QubitSubset(4, {0, 2, 3}));
        EXPECT_NEAR(std::abs(m.trace() - 1.0), 0.0, 1e-12);
        EXPECT_TRUE(is_hermitian(m, 1e-15));
    }
}

TEST(BasisRotation, RotatesEigenstatesToZ) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const ComplexMatrix u = basis_rotation(a);
        EXPECT_LT(max_abs(u * u.adjoint() - identity(1)), 1e-15);
        // U P U^dag = Z
        EXPECT_LT(max_abs(u * single_pauli(a) * u.adjoint() - single_pauli(Axis::Z)), 1e-15);
    }
}

TEST(Sampling, BornRule) {
    const DensityMatrix zero = basis_state(1, 0);
    const std::vector<Axis> z{Axis::Z}, x{Axis::X};
    for (std::uint64_t id = 0; id < 200; ++id) EXPECT_EQ(sample_snapshot(zero, 5, id, z).bits[0], 0);

    int ones = 0;
    for (std::uint64_t id = 0; id < 10000; ++id) ones += sample_snapshot(zero, 5, id, x).bits[0];
    EXPECT_NEAR(ones / 10000.0, 0.5, 0.02);

    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho = DensityMatrix::pure(2, bell);
    const std::vector<Axis> zz{Axis::Z, Axis::Z};
    int both_one = 0;
    for (std::uint64_t id = 0; id < 10000; ++id) {
        const auto s = sample_snapshot(rho, 9, id, zz);
        EXPECT_EQ(s.bits[0], s.bits[1]);
        both_one += s.bits[0];
    }
    EXPECT_NEAR(both_one / 10000.0, 0.5, 0.02);
}

TEST(Sampling, DistributionMatchesOracle) {
    std::mt19937_64 rng(2);
    const DensityMatrix rho(3, oracle::random_density(8, rng));
    const std::vector<Axis> bases{Axis::X, Axis::Y, Axis::Z};
    ComplexMatrix u = basis_rotation(bases[0]);
    for (int q = 1; q < 3; ++q) u = oracle::kron(u, basis_rotation(bases[q]));
    const ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
    const auto probs = measurement_distribution(rho, bases);
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(probs[k], rotated(k, k).real(), 1e-14);
}

TEST(Sampling, SamplerMatchesSingleShots) {
    std::mt19937_64 rng(3);
    const DensityMatrix rho(3, oracle::random_density(8, rng));
    ShadowSampler sampler(rho);
    const ShadowEnsemble ens = sampler.sample(300, 77, 1000);
    ASSERT_EQ(ens.size(), 300u);
    for (std::size_t k = 0; k < ens.size(); ++k) {
        EXPECT_EQ(ens.snapshots[k], sample_snapshot(rho, 77, 1000 + k));
    }
    EXPECT_LE(sampler.cached_settings(), 27u);
    EXPECT_EQ(sampler.sample(300, 77, 1000).snapshots, ens.snapshots);
}

TEST(EstimateRdm, SingleSnapshotAndInvariants) {
    std::mt19937_64 rng(4);
    const DensityMatrix rho(3, oracle::random_density(8, rng));
    ShadowSampler sampler(rho);
    const QubitSubset region(3, {0, 2});
    const ShadowEnsemble one = sampler.sample(1, 1);
    EXPECT_EQ(estimate_rdm(one, region), snapshot_local_matrix(one.snapshots[0], region));
    for (std::size_t m : {2u, 17u, 500u}) {
        const ComplexMatrix est = estimate_rdm(sampler.sample(m, 2), region);
        EXPECT_NEAR(std::abs(est.trace() - 1.0), 0.0, 1e-10);
        EXPECT_EQ(hermitian_deviation(est), 0.0);
    }
}

TEST(EstimateRdm, ConvergesToKnownState) {
    ShadowSampler sampler(basis_state(2, 0));
    const QubitSubset both = QubitSubset::all(2);
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        errs.push_back((estimate_rdm(sampler.sample(100000, seed), both) - basis_state(2, 0).matrix()).norm());
    }
    EXPECT_LT(median(errs), 0.05);
}

TEST(EstimateRdm, InverseSquareRootScaling) {
    std::mt19937_64 rng(5);
    const DensityMatrix rho(2, oracle::random_density(4, rng));
    ShadowSampler sampler(rho);
    const QubitSubset both = QubitSubset::all(2);
    std::vector<double> ratios;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double small = (estimate_rdm(sampler.sample(2000, seed), both) - rho.matrix()).norm();
        const double large = (estimate_rdm(sampler.sample(8000, seed + 1000), both) - rho.matrix()).norm();
        ratios.push_back(large / small);
    }
    const double r = median(ratios);
    EXPECT_GE(r, 0.3);
    EXPECT_LE(r, 0.7);
}

TEST(EstimateRdm, Unbiased) {
    std::mt19937_64 rng(6);
    const DensityMatrix rho(2, oracle::random_density(4, rng));
    ShadowSampler sampler(rho);
    const QubitSubset both = QubitSubset::all(2);
    const int reps = 200;
    std::vector<ComplexMatrix> estimates;
    for (int k = 0; k < reps; ++k) estimates.push_back(estimate_rdm(sampler.sample(100, 5000 + k), both));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int part = 0; part < 2; ++part) {
                auto pick = [&](const Complex& z) { return part ? z.imag() : z.real(); };
                double mean = 0.0, sq = 0.0;
                for (const auto& e : estimates) mean += pick(e(i, j));
                mean /= reps;
                for (const auto& e : estimates) sq += (pick(e(i, j)) - mean) * (pick(e(i, j)) - mean);
                const double se = std::sqrt(sq / (reps - 1) / reps);
                EXPECT_LE(std::abs(mean - pick(rho.matrix()(i, j))), 3.0 * se + 1e-12) << i << "," << j;
            }
        }
    }
}

TEST(EstimateRdm, VarianceGrowsWithRegion) {
    std::mt19937_64 rng(7);
    const DensityMatrix rho(3, oracle::random_density(8, rng));
    ShadowSampler sampler(rho);
    const QubitSubset one(3, {0}), two(3, {0, 1});
    const ComplexMatrix t1 = partial_trace(rho.matrix(), one), t2 = partial_trace(rho.matrix(), two);
    std::vector<double> e1, e2;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const ShadowEnsemble ens = sampler.sample(2000, seed);
        // mean squared entry error, so the count of entries cancels
        e1.push_back((estimate_rdm(ens, one) - t1).squaredNorm() / 4.0);
        e2.push_back((estimate_rdm(ens, two) - t2).squaredNorm() / 16.0);
    }
    const double factor = median(e2) / median(e1);
    EXPECT_GE(factor, 2.0);
    EXPECT_LE(factor, 4.5);
}

TEST(EstimatePurity, KnownStates) {
    const QubitSubset q(1, {0});
    ShadowSampler pure(basis_state(1, 0));
    EXPECT_NEAR(estimate_purity(pure.sample(100000, 1), q), 1.0, 0.05);
    ShadowSampler mixed(DensityMatrix::maximally_mixed(1));
    EXPECT_NEAR(estimate_purity(mixed.sample(100000, 2), q), 0.5, 0.05);
    EXPECT_THROW(estimate_purity(pure.sample(1, 1), q), ConfigError);
}

TEST(EstimatePurity, PermutationSymmetricAndMultiplicative) {
    std::mt19937_64 rng(8);
    const ComplexMatrix ra = oracle::random_density(2, rng), rb = oracle::random_density(2, rng);
    const DensityMatrix rho(2, oracle::kron(ra, rb));
    ShadowSampler sampler(rho);
    ShadowEnsemble ens = sampler.sample(50000, 3);
    const QubitSubset both = QubitSubset::all(2);
    const double p = estimate_purity(ens, both);
    std::shuffle(ens.snapshots.begin(), ens.snapshots.end(), rng);
    EXPECT_EQ(estimate_purity(ens, both), p);

    const double pa = estimate_purity(ens, QubitSubset(2, {0}));
    const double pb = estimate_purity(ens, QubitSubset(2, {1}));
    EXPECT_NEAR(p, pa * pb, 0.05);
    EXPECT_NEAR(p, (ra * ra).trace().real() * (rb * rb).trace().real(), 0.05);
}

TEST(ShadowLvp, SingleQubitRatio) {
    // pure product state, H = Z on qubit 1: ratio -> <Z_1>
    const int n = 3;
    ComplexVector q1 = ComplexVector::Zero(2);
    q1 << std::cos(0.4), std::sin(0.4);
    ComplexVector psi = oracle::kron(oracle::kron(ComplexVector::Constant(2, 1 / std::sqrt(2.0)), q1),
                                     ComplexVector::Unit(2, 0));
    const DensityMatrix rho = DensityMatrix::pure(n, psi);
    ShadowSampler sampler(rho);
    const auto est = shadow_lvp_energy(sampler.sample(40000, 4), {single_z_term(n, 1)}, {build_regions(0, 0, n)});
    const double expected = std::cos(0.8);
    EXPECT_NEAR(est.estimate.energy, expected, 4.0 * est.jackknife_stderr + 1e-3);
    EXPECT_LT(est.jackknife_stderr, 0.05);
}

TEST(ShadowLvp, PureGroundStateConverges) {
    // Only full-coverage regions reproduce E_g on a pure state: a reduced
    // state of an entangled ground state is mixed, so localized purification
    // of it is not E_g.
    const XxzParams p{4, -1.0, -0.73, 1.0};
    const GroundState g = ground_state(build_problem(p));
    const DensityMatrix rho = DensityMatrix::pure(4, g.vector);
    ShadowSampler sampler(rho);
    const auto terms = build_local_terms(p);
    const auto full = build_all_regions(1, 4);
    ASSERT_TRUE(full.front().covers_all);
    const auto local = build_all_regions(0, 4);
    EXPECT_GT(std::abs(lvp_energy(rho, terms, local, 2).energy - g.energy), 0.1);

    for (std::size_t m : {5000u, 80000u}) {
        const ShadowEnsemble ens = sampler.sample(m, 11);
        const auto est = shadow_lvp_energy(ens, terms, full);
        EXPECT_LE(std::abs(est.estimate.energy - g.energy), 3.0 * est.jackknife_stderr) << "M=" << m;
        EXPECT_EQ(est.estimate.failed_terms(), 0);
        EXPECT_TRUE(std::isfinite(est.jackknife_bias));

        const auto loc = shadow_lvp_energy(ens, terms, local);
        EXPECT_LE(std::abs(loc.estimate.energy - lvp_energy(rho, terms, local, 2).energy), 3.0 * loc.jackknife_stderr);
    }
}

TEST(ShadowLvp, MatchesExactLvpWithManyShots) {
    const int n = 4;
    const XxzParams p{n, -1.0, -0.73, 1.0};
    std::mt19937_64 rng(9);
    // mildly mixed state near the ground state
    const GroundState g = ground_state(build_problem(p));
    const DensityMatrix rho(n, 0.85 * g.vector * g.vector.adjoint() + 0.15 * oracle::random_density(16, rng));
    const auto terms = build_local_terms(p);
    const auto regions = build_all_regions(0, n);
    const double exact = lvp_energy(rho, terms, regions, 2).energy;
    ShadowSampler sampler(rho);
    const auto est = shadow_lvp_energy(sampler.sample(100000, 12), terms, regions);
    EXPECT_NEAR(est.estimate.energy, exact, 4.0 * est.jackknife_stderr);
}

TEST(ShadowLvp, SharedVersusDedicatedEnsembles) {
    const int n = 4;
    const XxzParams p{n, -1.0, -0.73, 1.0};
    std::mt19937_64 rng(10);
    const GroundState g = ground_state(build_problem(p));
    const DensityMatrix rho(n, 0.8 * g.vector * g.vector.adjoint() + 0.2 * oracle::random_density(16, rng));
    const auto terms = build_local_terms(p);
    const auto regions = build_all_regions(0, n);
    ShadowSampler sampler(rho);
    const std::size_t m = 30000;
    const auto shared = shadow_lvp_energy(sampler.sample(m, 100), terms, regions);
    double dedicated = 0.0, var = 0.0;
    for (int t = 0; t < n; ++t) {
        const auto one = shadow_lvp_energy(sampler.sample(m, 200 + t), {terms[t]}, {regions[t]});
        dedicated += one.estimate.energy;
        var += one.jackknife_stderr * one.jackknife_stderr;
    }
    const double se = std::sqrt(var + shared.jackknife_stderr * shared.jackknife_stderr);
    EXPECT_LE(std::abs(shared.estimate.energy - dedicated), 2.0 * se);
}

TEST(ShadowLvp, BatchesAndFailures) {
    const XxzParams p{4, -1.0, -0.73, 1.0};
    const auto terms = build_local_terms(p);
    const auto regions = build_all_regions(1, 4);
    ShadowSampler sampler(DensityMatrix::maximally_mixed(4));
    const ShadowEnsemble ens = sampler.sample(3000, 1);
    const auto mom = shadow_lvp_energy(ens, terms, regions, {5, false});
    EXPECT_EQ(mom.batch_energies.size(), 5u);
    EXPECT_TRUE(std::isnan(mom.jackknife_bias));
    EXPECT_THROW(shadow_lvp_energy(ens, terms, regions, {2000, false}), ConfigError);

    // a handful of shots on a 4-qubit region often gives a non-positive purity
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto est = shadow_lvp_energy(sampler.sample(2, seed), terms, regions);
        failures += est.estimate.failed_terms();
        for (const auto& t : est.estimate.terms) EXPECT_EQ(t.failed, !(t.denominator > 0.0));
    }
    EXPECT_GT(failures, 0);
}

TEST(SnapshotFile, RoundTrip) {
    std::mt19937_64 rng(11);
    ShadowSampler sampler(DensityMatrix(3, oracle::random_density(8, rng)));
    const ShadowEnsemble ens = sampler.sample(50, 42);
    std::stringstream ss;
    write_snapshots(ens, ss);
    const ShadowEnsemble back = read_snapshots(ss, 42);
    EXPECT_EQ(back.snapshots, ens.snapshots);
    EXPECT_EQ(back.n_qubits, 3);

    std::stringstream one;
    write_snapshots(ShadowEnsemble{3, 0, {{42, {Axis::Z, Axis::X, Axis::Y}, {1, 0, 1}}}}, one);
    EXPECT_EQ(one.str(), "42,zxy,101\n");

    std::stringstream empty;
    EXPECT_EQ(read_snapshots(empty).size(), 0u);
}

TEST(SnapshotFile, RejectsMalformed) {
    for (const char* bad : {"1,zx,0\n", "1,zq,01\n", "1,zz,02\n", "x,zz,01\n", "1,zz\n", "1,zz,01\n1,xx,00\n",
                            "1,zz,01\n2,xxx,000\n"}) {
        std::stringstream ss(bad);
        EXPECT_THROW(read_snapshots(ss), ConfigError) << bad;
    }
}
