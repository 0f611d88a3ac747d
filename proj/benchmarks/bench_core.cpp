#include "bq/acquisition.hpp"
#include "bq/design.hpp"
#include "bq/embedding.hpp"
#include "bq/hyper.hpp"
#include "bq/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace bq;

namespace {

Dataset smooth_data(int n) {
    Dataset d;
    d.X = generate_design({DesignStrategy::Sobol, 1, n, 0});
    d.f.resize(n);
    for (int i = 0; i < n; ++i) d.f(i) = std::sin(7 * d.X(i, 0)) + d.X(i, 0);
    return d;
}

const KernelSpec kMatern = KernelSpec::matern(Smoothness::FiveHalves, 1, 1.0, 0.2);

void BM_Gram(benchmark::State& state) {
    const NodeSet X = generate_design({DesignStrategy::Sobol, 1, static_cast<int>(state.range(0)), 0});
    for (auto _ : state) benchmark::DoNotOptimize(gram(kMatern, X));
}
BENCHMARK(BM_Gram)->RangeMultiplier(4)->Range(16, 1024);

void BM_CholeskyWithNugget(benchmark::State& state) {
    const NodeSet X = generate_design({DesignStrategy::Sobol, 1, static_cast<int>(state.range(0)), 0});
    const Matrix K = gram(KernelSpec::square_exponential(1, 1.0, 0.3), X);
    for (auto _ : state) benchmark::DoNotOptimize(cholesky_with_nugget(K, NuggetPolicy{}).lambda_used());
}
BENCHMARK(BM_CholeskyWithNugget)->RangeMultiplier(4)->Range(16, 1024);

void BM_Embedding(benchmark::State& state) {
    const NodeSet X = generate_design({DesignStrategy::Sobol, 1, static_cast<int>(state.range(0)), 0});
    for (auto _ : state) benchmark::DoNotOptimize(embed(kMatern, Measure::uniform(1), X).k_PP);
}
BENCHMARK(BM_Embedding)->RangeMultiplier(4)->Range(16, 1024);

void BM_BqInfer(benchmark::State& state) {
    const Dataset d = smooth_data(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bq_infer(kMatern, Measure::uniform(1), d, NuggetPolicy{}).mu);
}
BENCHMARK(BM_BqInfer)->RangeMultiplier(4)->Range(16, 1024);

void BM_FitMl(benchmark::State& state) {
    const Dataset d = smooth_data(static_cast<int>(state.range(0)));
    FitOptions opts;
    for (auto _ : state) benchmark::DoNotOptimize(fit_ml(kMatern, d, opts).log_marginal);
}
BENCHMARK(BM_FitMl)->Arg(10)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MaximizeAcquisition(benchmark::State& state) {
    const Dataset d = smooth_data(static_cast<int>(state.range(0)));
    const SequentialState st = SequentialState::make(kMatern, Measure::uniform(1), d, NuggetPolicy{});
    const SearchConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(maximize_acquisition(AcquisitionKind::IVR, st, cfg));
}
BENCHMARK(BM_MaximizeAcquisition)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Sobol(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sobol_points(8, state.range(0)));
}
BENCHMARK(BM_Sobol)->Arg(1024)->Arg(65536);

}  // namespace

BENCHMARK_MAIN();
