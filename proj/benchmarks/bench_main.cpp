#include <benchmark/benchmark.h>

#include "fracdiff/fixture.hpp"
#include "fracdiff/green.hpp"
#include "fracdiff/model.hpp"
#include "fracdiff/pricing.hpp"
#include "fracdiff/volatility.hpp"

using namespace fracdiff;

namespace {

const ModelParams kDfrac = ModelParams::double_fractional(1.7, 0.9, 0.2);
const PricingInputs kFig3(3800, 4000, 0.01, 1);

void BM_MuSeries(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mu_gamma_series(kDfrac).mu);
}
BENCHMARK(BM_MuSeries);

void BM_MuContour(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mu_gamma_mb(kDfrac));
}
BENCHMARK(BM_MuContour)->Unit(benchmark::kMillisecond);

void BM_SeriesDouble(benchmark::State& state) {
    const RiskNeutralParam mu = mu_gamma_series(kDfrac);
    for (auto _ : state) benchmark::DoNotOptimize(dfrac_call_series(kDfrac, kFig3, mu).price);
}
BENCHMARK(BM_SeriesDouble)->Unit(benchmark::kMicrosecond);

// far from the money the double-precision sum cancels and is redone in MPFR
void BM_SeriesMultiprecision(benchmark::State& state) {
    const ModelParams p = ModelParams::double_fractional(2, 1, 0.1);
    const PricingInputs in(70, 100, 0, 0.1);
    const RiskNeutralParam mu = mu_gamma_series(p);
    for (auto _ : state) benchmark::DoNotOptimize(dfrac_call_series(p, in, mu).price);
}
BENCHMARK(BM_SeriesMultiprecision)->Unit(benchmark::kMillisecond);

void BM_SmileTruncated(benchmark::State& state) {
    const QuoteChain chain = fixture::chain();
    for (auto _ : state) benchmark::DoNotOptimize(build_smile(chain, {0.8, 0.9, 1.1}));
}
BENCHMARK(BM_SmileTruncated)->Unit(benchmark::kMillisecond);

void BM_GreenKernelSetup(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(GreenKernel(1.7, 0.9, -0.05, 1.0).scale());
}
BENCHMARK(BM_GreenKernelSetup)->Unit(benchmark::kMicrosecond);

void BM_GreenKernelEval(benchmark::State& state) {
    const GreenKernel k(1.7, 0.9, -0.05, 1.0);
    double x = -0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(k(x));
        x = x > 0.3 ? -0.3 : x + 0.01;
    }
}
BENCHMARK(BM_GreenKernelEval)->Unit(benchmark::kMicrosecond);

void BM_ReferencePrice(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(reference_price(kDfrac, kFig3, {}, NegativeBranch::AnalyticContinuation));
}
BENCHMARK(BM_ReferencePrice)->Unit(benchmark::kMillisecond);

void BM_ImpliedVolDfrac(benchmark::State& state) {
    const double c = price(kDfrac.with_sigma(0.25), kFig3);
    for (auto _ : state) benchmark::DoNotOptimize(implied_vol(kDfrac, kFig3, c).sigma);
}
BENCHMARK(BM_ImpliedVolDfrac)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
