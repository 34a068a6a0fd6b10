#include <benchmark/benchmark.h>

#include "hlv/trainer.hpp"
#include "testutil.hpp"

namespace {

using namespace hlv;

void BM_TrainEpochs(benchmark::State& state, Method method) {
    const auto corpus = hlvtest::make_synthetic_corpus(state.range(0), 5, 16, 42);
    const MethodTarget target = build_target(method, corpus.annotations, corpus.space);
    TrainConfig config;
    config.method = method;
    config.epochs = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(target, corpus.features, config, corpus.space));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * config.epochs);
}
BENCHMARK_CAPTURE(BM_TrainEpochs, SL, Method::SL)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainEpochs, ReL, Method::ReL)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainEpochs, SmF1, Method::SmF1)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainEpochs, AE, Method::AE)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
    const auto corpus = hlvtest::make_synthetic_corpus(state.range(0), 5, 16, 42);
    const MethodTarget target = build_target(Method::SL, corpus.annotations, corpus.space);
    TrainConfig config;
    config.method = Method::SL;
    config.epochs = 1;
    const Model model = train(target, corpus.features, config, corpus.space);
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(model, corpus.features));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Predict)->Range(100, 10000);

void BM_FeaturizeText(benchmark::State& state) {
    std::vector<std::string> texts;
    for (int i = 0; i < state.range(0); ++i) {
        texts.push_back("the quick brown fox jumps over the lazy dog number " +
                        std::to_string(i));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(featurize_text(texts));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FeaturizeText)->Range(100, 10000);

}  // namespace

BENCHMARK_MAIN();
