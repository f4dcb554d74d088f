#include <benchmark/benchmark.h>

#include "hypconf/fixtures.hpp"
#include "hypconf/metric.hpp"

using namespace hypconf;

// Spread 0.3 keeps every length ratio below 2, so any complex is triangulable.

static void BM_MakeDelaunay(benchmark::State& state)
{
    const auto m = fixtures::random_metric(fixtures::genus2_with_vertices(static_cast<int>(state.range(0))), 42, 0.3);
    std::size_t flips = 0;
    for (auto _ : state) {
        auto r = make_delaunay(m);
        flips = r.flips.size();
        benchmark::DoNotOptimize(r);
    }
    state.counters["flips"] = static_cast<double>(flips);
    state.counters["edges"] = m.triangulation().edge_count();
}
BENCHMARK(BM_MakeDelaunay)->Arg(0)->Arg(4)->Arg(16)->Arg(64);

static void BM_Curvature(benchmark::State& state)
{
    const auto m = make_delaunay(
        fixtures::random_metric(fixtures::genus2_with_vertices(static_cast<int>(state.range(0))), 7, 0.3)).metric;
    for (auto _ : state) benchmark::DoNotOptimize(curvature(m));
}
BENCHMARK(BM_Curvature)->Arg(4)->Arg(64);

BENCHMARK_MAIN();
