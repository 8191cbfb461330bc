#include <benchmark/benchmark.h>

#include "hypertree/paritygen.hpp"
#include "hypertree/projection.hpp"
#include "hypertree/solvers.hpp"
#include "hypertree/weights.hpp"
#include "test_support.hpp"

using namespace hypertree;

namespace {

const Dataset& sample_data() {
    static const Dataset data = [] {
        oracle::Rng rng(12);
        return oracle::to_dataset(oracle::random_raw(rng, 12, 20000, {2, 3}));
    }();
    return data;
}

const ProjectedModel& sample_model() {
    static const ProjectedModel model = [] {
        const WeightFunction wf = compute_weights(sample_data(), 2);
        return project(sample_data(), greedy(wf).tree);
    }();
    return model;
}

void BM_weights_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(compute_weights(sample_data(), static_cast<int>(state.range(0))));
}

void BM_weights_serial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::compute_weights(sample_data(), static_cast<int>(state.range(0))));
}

void BM_loglik_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(sample_model(), sample_data()));
}

void BM_loglik_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(serial::log_likelihood(sample_model(), sample_data()));
}

void BM_exact_search(benchmark::State& state) {
    oracle::Rng rng(3);
    const WeightFunction wf = oracle::random_weights(rng, static_cast<int>(state.range(0)), 2, 0.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(exact_search(wf));
}

void BM_parity_generate(benchmark::State& state) {
    TargetBiases biases(static_cast<int>(state.range(0)), 2, 16);
    for (auto _ : state) benchmark::DoNotOptimize(generate(biases));
}

}  // namespace

BENCHMARK(BM_weights_parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weights_serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_loglik_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_loglik_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_search)->Arg(7)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parity_generate)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
