#include <benchmark/benchmark.h>

#include <random>

#include "hypconf/fixtures.hpp"
#include "hypconf/teich.hpp"

using namespace hypconf;

static void BM_Decide(benchmark::State& state)
{
    const int extra = static_cast<int>(state.range(0));
    const auto m = make_delaunay(fixtures::random_metric(fixtures::genus2_with_vertices(extra), 19, 0.3)).metric;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pick(-2.0, 2.0);
    std::vector<double> u(m.triangulation().vertex_count());
    for (double& x : u) x = pick(rng);
    const auto image = conformal_change(m, u).metric;
    for (auto _ : state) benchmark::DoNotOptimize(decide_discrete_conformal(m, image));
}
BENCHMARK(BM_Decide)->Arg(1)->Arg(4)->Arg(16);

static void BM_Shear(benchmark::State& state)
{
    const auto l = theta(make_delaunay(fixtures::random_metric(fixtures::genus2_with_vertices(16), 2, 0.3)).metric);
    for (auto _ : state) benchmark::DoNotOptimize(log_shear(l));
}
BENCHMARK(BM_Shear);

BENCHMARK_MAIN();
