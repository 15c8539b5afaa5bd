#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "kld/detector.hpp"
#include "kld/generator.hpp"
#include "kld/pmf.hpp"
#include "kld/smoothing.hpp"

namespace {

using namespace kld;

std::vector<Chunk> stream(std::size_t n_chunks, std::size_t p) {
    GeneratorConfig g;
    g.p = p;
    g.n_chunks = n_chunks;
    g.n_drifts = n_chunks > 2 ? 2 : 0;
    StreamGenerator gen(g);
    return collect(gen);
}

void BM_Estimate(benchmark::State& state) {
    const auto chunks = stream(2, static_cast<std::size_t>(state.range(0)));
    const auto mode = state.range(1) != 0 ? GridMode::product : GridMode::slab;
    const auto grid = std::make_shared<const Grid>(Grid::build(chunk_bounds(chunks[0], chunks[1]), 5, mode));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate(chunks[0], grid, 2));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(chunks[0].size()));
}
BENCHMARK(BM_Estimate)->Args({4, 0})->Args({4, 1})->Args({8, 0});

void BM_ChunkDistance(benchmark::State& state) {
    const auto chunks = stream(2, static_cast<std::size_t>(state.range(0)));
    DetectorConfig c;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chunk_distance(chunks[0], chunks[1], c, 2));
    }
}
BENCHMARK(BM_ChunkDistance)->Arg(4)->Arg(16);

void BM_Lowess(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    for (auto& v : x) {
        v = n(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(lowess(x, 0.05, 1));
    }
}
BENCHMARK(BM_Lowess)->Arg(1000)->Arg(10000);

void BM_DetectBatch(benchmark::State& state) {
    const auto chunks = stream(static_cast<std::size_t>(state.range(0)), 4);
    StreamMeta meta;
    meta.dim = 4;
    meta.chunk_size = chunks[0].size();
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_batch(chunks, meta, DetectorConfig{}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectBatch)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
