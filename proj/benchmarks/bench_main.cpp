#include <benchmark/benchmark.h>

#include <vector>

#include "mwk/dense.hpp"
#include "mwk/eynard_mehta.hpp"
#include "mwk/necklace.hpp"
#include "mwk/rng.hpp"
#include "mwk/specfun.hpp"
#include "mwk/whittaker_kernel.hpp"

namespace {

using mwk::numerics::DenseMatrix;
using mwk::numerics::RngStream;

void BM_WhittakerW(benchmark::State& state) {
    const double kappa = static_cast<double>(state.range(0)) / 4.0;
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mwk::specfun::whittaker_w({kappa, 0.3, x}));
        x = x < 8.0 ? x * 1.1 : 0.5;
    }
}
BENCHMARK(BM_WhittakerW)->Arg(-4)->Arg(0)->Arg(4)->Arg(12);

void BM_Det(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RngStream rng(1);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform() - 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(mwk::numerics::det(m));
}
BENCHMARK(BM_Det)->RangeMultiplier(2)->Range(2, 64);

void BM_NecklaceLhs(benchmark::State& state) {
    RngStream rng(2);
    const auto dk = mwk::necklace::random_pair(3, 3, rng);
    std::vector<mwk::necklace::GridPoint> pts;
    for (int i = 0; i < state.range(0); ++i) pts.push_back({i % 2 == 0, static_cast<std::size_t>(i % 3)});
    for (auto _ : state) benchmark::DoNotOptimize(mwk::necklace::necklace_lhs(dk, pts));
}
BENCHMARK(BM_NecklaceLhs)->DenseRange(1, 4);

void BM_LaplaceExpand(benchmark::State& state) {
    RngStream rng(3);
    DenseMatrix m(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) m(i, j) = rng.uniform() - 0.5;
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mwk::necklace::laplace_expand(m, k, 4 - k));
}
BENCHMARK(BM_LaplaceExpand)->DenseRange(0, 4);

void BM_KernelMatrix(benchmark::State& state) {
    const auto p = mwk::whittaker::validate_params(-0.3, -0.6);
    mwk::whittaker::Configuration pts;
    for (int i = 0; i < state.range(0); ++i) pts.emplace_back(i % 2 == 0 ? 0.5 + i : -0.7 - i);
    for (auto _ : state) benchmark::DoNotOptimize(mwk::whittaker::correlation(p, pts));
}
BENCHMARK(BM_KernelMatrix)->DenseRange(1, 4);

void BM_PairingMoments(benchmark::State& state) {
    const auto model = mwk::em::gaussian_model(1.0, 1.0, 0.5, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mwk::em::pairing_moments(model));
}
BENCHMARK(BM_PairingMoments)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
