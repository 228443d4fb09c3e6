// Serial reference versus the OpenMP kernels. Both paths produce identical
// output for a given (seed, shards); only wall time differs.
#include <benchmark/benchmark.h>

#include "superfid/batch.hpp"
#include "superfid/samplers.hpp"

namespace {

using superfid::Execution;
using superfid::MeasureKind;
using superfid::ShardPlan;

constexpr int kShards = 16;

void BM_HsPurities(benchmark::State& state, Execution execution) {
    const int n = static_cast<int>(state.range(0));
    const auto count = static_cast<std::uint64_t>(state.range(1));
    const ShardPlan plan{1, kShards, execution};
    for (auto _ : state) {
        benchmark::DoNotOptimize(superfid::hs_purities(n, count, plan));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}

void BM_SampleBatch(benchmark::State& state, MeasureKind measure, Execution execution) {
    const int n = static_cast<int>(state.range(0));
    const auto count = static_cast<std::uint64_t>(state.range(1));
    const ShardPlan plan{1, kShards, execution};
    // Keep the one-off envelope audit out of the timed loop.
    if (measure == MeasureKind::SuperfidelityG && n >= 3) superfid::verified_envelope(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(superfid::sample_batch(measure, n, count, plan));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}

}  // namespace

BENCHMARK_CAPTURE(BM_HsPurities, serial, Execution::Serial)->Args({3, 20000})->Args({6, 20000});
BENCHMARK_CAPTURE(BM_HsPurities, parallel, Execution::Parallel)->Args({3, 20000})->Args({6, 20000});

BENCHMARK_CAPTURE(BM_SampleBatch, bures_serial, MeasureKind::Bures, Execution::Serial)->Args({3, 10000});
BENCHMARK_CAPTURE(BM_SampleBatch, bures_parallel, MeasureKind::Bures, Execution::Parallel)->Args({3, 10000});
BENCHMARK_CAPTURE(BM_SampleBatch, g_serial, MeasureKind::SuperfidelityG, Execution::Serial)->Args({3, 5000});
BENCHMARK_CAPTURE(BM_SampleBatch, g_parallel, MeasureKind::SuperfidelityG, Execution::Parallel)
    ->Args({3, 5000});

BENCHMARK_MAIN();
