// Serial reference paths against their OpenMP counterparts. Arg 0 is serial,
// arg 1 parallel.
#include <benchmark/benchmark.h>

#include <numeric>

#include "monotest/harness.hpp"
#include "monotest/lpe.hpp"
#include "monotest/multiscale.hpp"
#include "monotest/signals.hpp"

using namespace monotest;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_EstimateIndices(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(1));
    const Sample s = generate_sample(Signal(SignalId::F1), n, 0.3, 1);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{1});
    const KernelSpec k = kernel_constants(KernelId::Epanechnikov);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_indices(s.y, 0.1, 1, k, idx, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EstimateIndices)->ArgsProduct({{0, 1}, {1600, 6400}})->Unit(benchmark::kMillisecond);

void BM_MultiscaleStatistic(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(1));
    const Sample s = generate_sample(Signal(SignalId::F3), n, 0.3, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ds_statistic(MultiscaleVariant::Ds1, s.y, 0.3, mode(state)));
    }
}
BENCHMARK(BM_MultiscaleStatistic)->ArgsProduct({{0, 1}, {400, 800}})->Unit(benchmark::kMillisecond);

void BM_MonteCarloCritical(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            mc_critical(MultiscaleVariant::Ds2, 400, 0.3, 0.05, 50, 3, mode(state)));
    }
}
BENCHMARK(BM_MonteCarloCritical)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PowerCell(benchmark::State& state) {
    ExperimentPlan plan;
    plan.repetitions = 20;
    plan.master_seed = 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_cell(plan, Method::Fomt, SignalId::F0, 800, mode(state)));
    }
}
BENCHMARK(BM_PowerCell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
