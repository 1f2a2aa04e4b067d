// bench_kernels.cpp — serial reference vs OpenMP paths: bound sweeps and generator tables

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "mqme/bounds.hpp"
#include "mqme/kernels.hpp"

namespace {

using namespace mqme;

std::vector<double> log_grid(int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = std::pow(10.0, -3.0 + 3.0 * i / (n - 1));
    return g;
}

const std::vector<bounds::Order> kOrders{bounds::Order::fixed(1, 1), bounds::Order::fixed(2, 2),
                                         bounds::Order::exp_order(), bounds::Order::fixed(7, 7)};

void BM_BoundSweepSerial(benchmark::State& state) {
    const auto grid = log_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bounds::bound_sweep_serial(grid, kOrders));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size() * kOrders.size()));
}

void BM_BoundSweepParallel(benchmark::State& state) {
    const auto grid = log_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bounds::bound_sweep(grid, kOrders));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size() * kOrders.size()));
}

// A fresh evaluator per iteration: tables are memoized inside the evaluator.
template <Execution Exec>
void BM_GeneratorTable(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    const SystemModel sys = spin_boson_system(1.0);
    const BathModel bath = lorentzian_bath(0.1, 1.0, 5.5);
    for (auto _ : state) {
        const KernelEvaluator ev(sys, bath);
        benchmark::DoNotOptimize(ev.table(order, order, Exec));
    }
}

} // namespace

BENCHMARK(BM_BoundSweepSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundSweepParallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneratorTable<Execution::serial>)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneratorTable<Execution::parallel>)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
