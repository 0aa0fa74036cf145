// Serial reference vs OpenMP kernels on the operators a sweep actually uses.

#include <benchmark/benchmark.h>

#include <random>

#include "lvpqa/dynamics.hpp"
#include "lvpqa/kernels.hpp"
#include "lvpqa/model.hpp"

using namespace lvpqa;

namespace {

ComplexMatrix random_state(int n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    const int d = 1 << n;
    ComplexMatrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
    ComplexMatrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

struct Fixture {
    GroupedOperator h;
    PauliJumps jumps;
    ComplexMatrix rho;
    ComplexMatrix out;

    explicit Fixture(int n)
        : h(GroupedOperator::from_pauli_sum(problem_pauli_sum({n, -1.0, -0.73, 1.0}))),
          jumps(NoiseSpec::depolarizing(n, 0.0025).to_jumps(n)),
          rho(random_state(n)),
          out(ComplexMatrix::Zero(rho.rows(), rho.cols())) {}
};

void BM_CommutatorSerial(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        serial::add_commutator(f.h, f.rho, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

void BM_CommutatorOmp(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        omp::add_commutator(f.h, f.rho, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

void BM_DissipatorSerial(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        serial::add_pauli_dissipator(f.jumps, 0.0025, f.rho, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

void BM_DissipatorOmp(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        omp::add_pauli_dissipator(f.jumps, 0.0025, f.rho, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

// full master-equation right-hand side, as evaluated four times per RK4 step
void BM_RhsSerial(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        f.out.setZero();
        serial::add_commutator(f.h, f.rho, f.out);
        serial::add_pauli_dissipator(f.jumps, 0.0025, f.rho, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

void BM_RhsOmp(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        omp::hermitian_rhs(f.h, f.jumps, 0.0025, f.rho, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

void BM_PartialTraceSerial(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const ComplexMatrix rho = random_state(n);
    const QubitSubset keep(n, {0, 1, 2});
    for (auto _ : st) benchmark::DoNotOptimize(serial::partial_trace(rho, keep));
}

void BM_PartialTraceOmp(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const ComplexMatrix rho = random_state(n);
    const QubitSubset keep(n, {0, 1, 2});
    for (auto _ : st) benchmark::DoNotOptimize(omp::partial_trace(rho, keep));
}

}  // namespace

BENCHMARK(BM_CommutatorSerial)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CommutatorOmp)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DissipatorSerial)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DissipatorOmp)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsSerial)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsOmp)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PartialTraceSerial)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PartialTraceOmp)->DenseRange(5, 9, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
