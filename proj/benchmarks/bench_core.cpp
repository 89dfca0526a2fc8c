#include <benchmark/benchmark.h>

#include <random>

#include "circqft/circulant.hpp"
#include "circqft/linalg.hpp"
#include "circqft/models.hpp"
#include "circqft/propagator.hpp"
#include "circqft/qpe.hpp"
#include "circqft/schedule.hpp"

using namespace circqft;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = gauss(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = cplx(gauss(rng), gauss(rng));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

Schedule demo(double energy) {
    const auto m = build_four_level(energy, energy * cplx(1.0, 1.0 / 3.0));
    return Schedule(PulsePair::sech_masked(1.0, 1.0), m.h0, m.h1, Direction::Forward);
}

}  // namespace

static void BM_HermitianEigen(benchmark::State& state) {
    const auto m = random_hermitian(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigen(m));
}
BENCHMARK(BM_HermitianEigen)->RangeMultiplier(2)->Range(4, 64);

static void BM_UnitaryExp(benchmark::State& state) {
    const auto m = random_hermitian(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(unitary_exp(m, 1e-3));
}
BENCHMARK(BM_UnitaryExp)->Arg(4)->Arg(16);

static void BM_CirculantEigenvalues(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<cplx> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = cplx(1.0 / (1.0 + k), 0.5 / (2.0 + k));
    const CirculantSpec spec(col);
    for (auto _ : state) benchmark::DoNotOptimize(circulant_eigenvalues(spec));
}
BENCHMARK(BM_CirculantEigenvalues)->RangeMultiplier(2)->Range(4, 64);

static void BM_VerifyDftDiagonalizes(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<cplx> col(n);
    col[1] = cplx(1.0, 0.3);
    col[n - 1] = std::conj(col[1]);
    const CirculantSpec spec(col);
    for (auto _ : state) verify_dft_diagonalizes(spec);
}
BENCHMARK(BM_VerifyDftDiagonalizes)->Arg(8)->Arg(32);

static void BM_EvolveDemo(benchmark::State& state) {
    const Schedule s = demo(10.0).with_steps(static_cast<std::size_t>(state.range(0)));
    EvolutionOptions opts;
    opts.estimate_convergence = false;
    for (auto _ : state) benchmark::DoNotOptimize(evolve(s, opts));
}
BENCHMARK(BM_EvolveDemo)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_QpeDemo(benchmark::State& state) {
    const auto m = build_four_level(10.0, cplx(10.0, 10.0 / 3.0));
    QpeConfig cfg;
    cfg.h0 = m.h0;
    cfg.h1 = m.h1;
    for (auto _ : state) benchmark::DoNotOptimize(run_qpe(0.75, 2, cfg));
}
BENCHMARK(BM_QpeDemo)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
