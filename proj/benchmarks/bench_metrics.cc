#include <benchmark/benchmark.h>

#include <random>

#include "hlv/analysis.hpp"
#include "hlv/metrics.hpp"

namespace {

using namespace hlv;

JudgementMatrix random_multiclass(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(0.5, 1.0);
    Matrix values(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < cols; ++k) {
            values(i, k) = gamma(rng);
            sum += values(i, k);
        }
        for (std::size_t k = 0; k < cols; ++k) values(i, k) /= sum;
    }
    return {std::move(values), TaskKind::Multiclass};
}

void BM_SoftAccuracy(benchmark::State& state) {
    const std::size_t rows = state.range(0);
    const auto p = random_multiclass(rows, 10, 1);
    const auto q = random_multiclass(rows, 10, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(soft_accuracy(p, q));
    }
    state.SetItemsProcessed(state.iterations() * rows * 10);
}
BENCHMARK(BM_SoftAccuracy)->Range(100, 100000);

void BM_PoJsd(benchmark::State& state) {
    const std::size_t rows = state.range(0);
    const auto p = random_multiclass(rows, 10, 1);
    const auto q = random_multiclass(rows, 10, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(po_jsd(p, q));
    }
    state.SetItemsProcessed(state.iterations() * rows * 10);
}
BENCHMARK(BM_PoJsd)->Range(100, 100000);

void BM_EntropyCorrelation(benchmark::State& state) {
    const std::size_t rows = state.range(0);
    const auto p = random_multiclass(rows, 10, 1);
    const auto q = random_multiclass(rows, 10, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(entropy_correlation(p, q));
    }
}
BENCHMARK(BM_EntropyCorrelation)->Range(100, 100000);

void BM_SoftMacroF1(benchmark::State& state) {
    const std::size_t rows = state.range(0);
    const auto p = random_multiclass(rows, 10, 1);
    const auto q = random_multiclass(rows, 10, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(soft_macro_f1(p, q));
    }
}
BENCHMARK(BM_SoftMacroF1)->Range(100, 100000);

void BM_StudySample(benchmark::State& state) {
    // one Monte-Carlo sample of the correlation study at its default size
    StudyConfig config;
    config.classes = state.range(0);
    config.examples = 1000;
    config.samples = 3;
    config.alpha = 0.1;
    config.beta = 0.1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        config.seed = seed++;
        benchmark::DoNotOptimize(dirichlet_metric_correlations(config));
    }
}
BENCHMARK(BM_StudySample)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
