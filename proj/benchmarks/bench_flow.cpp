#include <benchmark/benchmark.h>

#include <random>

#include "hypconf/fixtures.hpp"
#include "hypconf/flow.hpp"

using namespace hypconf;

static void BM_NewtonGenus2(benchmark::State& state)
{
    const auto base = fixtures::uniform_metric(fixtures::genus2(), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(newton_solve(base, {0.0}));
}
BENCHMARK(BM_NewtonGenus2);

static void BM_Uniformize(benchmark::State& state)
{
    const auto base = fixtures::random_metric(fixtures::genus2_with_vertices(static_cast<int>(state.range(0))), 3, 0.3);
    int iterations = 0, flips = 0;
    for (auto _ : state) {
        auto r = uniformize(base);
        iterations = r.iterations;
        flips = static_cast<int>(r.flips.size());
        benchmark::DoNotOptimize(r);
    }
    state.counters["newton_iterations"] = iterations;
    state.counters["flips"] = flips;
}
BENCHMARK(BM_Uniformize)->Arg(2)->Arg(8)->Arg(32);

static void BM_Hessian(benchmark::State& state)
{
    const int extra = static_cast<int>(state.range(0));
    const auto base = make_delaunay(fixtures::random_metric(fixtures::genus2_with_vertices(extra), 11, 0.3)).metric;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pick(-0.5, 0.5);
    std::vector<double> u(base.triangulation().vertex_count());
    for (double& x : u) x = pick(rng);
    const auto s = advance(initial_state(base), u);
    for (auto _ : state) benchmark::DoNotOptimize(hessian(s));
}
BENCHMARK(BM_Hessian)->Arg(2)->Arg(8)->Arg(32);

static void BM_FlowGenus2(benchmark::State& state)
{
    const auto base = fixtures::uniform_metric(fixtures::genus2(), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(yamabe_flow(base, {0.0}));
}
BENCHMARK(BM_FlowGenus2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
