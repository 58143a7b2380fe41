#include "weyldyn/kernel.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace weyldyn;

namespace {

const Potential& box() { static const Potential p = make_catalog_potential(PotentialKind::constant_box, {1.0, 1.0}); return p; }

KernelField start(std::int64_t n)
{
    return build_Q(box(), TriangleGrid::make(4.0, 4.0 / static_cast<double>(n)));
}

// serial quadrature reference
void BM_apply_K_reference(benchmark::State& state)
{
    const KernelField q = start(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_K_reference(box(), q));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_apply_K_reference)->RangeMultiplier(2)->Range(16, 128)->Complexity();

// prefix-sum kernel, thread count as the second argument
void BM_apply_K(benchmark::State& state)
{
    omp_set_num_threads(static_cast<int>(state.range(1)));
    const KernelField q = start(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_K(box(), q));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_apply_K)->ArgsProduct({{16, 32, 64, 128, 512, 2048}, {1, 2, 4}})->UseRealTime();

void BM_neumann_solve(benchmark::State& state)
{
    omp_set_num_threads(static_cast<int>(state.range(1)));
    const TriangleGrid grid = TriangleGrid::make(8.0, 8.0 / static_cast<double>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(neumann_solve(box(), grid));
}
BENCHMARK(BM_neumann_solve)->ArgsProduct({{400, 800, 1600}, {1, 4}})->UseRealTime()->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
