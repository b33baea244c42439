// Compares the OpenMP-parallel Bellman kernels against the serial reference
// implementation, and full value iteration with the parallel backend on and
// off, on inventory models of increasing size.

#include <benchmark/benchmark.h>

#include "mdpa/bellman.hpp"
#include "mdpa/inventory.hpp"
#include "mdpa/solve.hpp"
#include "mdpa/weighting.hpp"

namespace {

using namespace mdpa;

InventoryParams sized(int s_max) {
    InventoryParams p;
    p.s_max = s_max;
    return p;
}

void bench_backup_parallel(benchmark::State& state) {
    FiniteMdp m = build_inventory(sized(static_cast<int>(state.range(0))));
    ValueVec v(m.num_states(), 1.0);
    for (auto _ : state) {
        GreedyBackup out = bellman_optimal(m, v);
        benchmark::DoNotOptimize(out.values.data());
    }
}

void bench_backup_serial(benchmark::State& state) {
    FiniteMdp m = build_inventory(sized(static_cast<int>(state.range(0))));
    ValueVec v(m.num_states(), 1.0);
    for (auto _ : state) {
        GreedyBackup out = serial::bellman_optimal(m, v);
        benchmark::DoNotOptimize(out.values.data());
    }
}

void bench_vi(benchmark::State& state, bool parallel) {
    FiniteMdp m = build_inventory(sized(static_cast<int>(state.range(0))));
    SolveOptions options;
    options.parallel = parallel;
    options.tol = 1e-6;
    for (auto _ : state) {
        SolveResult out = value_iteration(m, options);
        benchmark::DoNotOptimize(out.value.data());
    }
}

void bench_vi_parallel(benchmark::State& state) { bench_vi(state, true); }
void bench_vi_serial(benchmark::State& state) { bench_vi(state, false); }

void bench_kappa_model(benchmark::State& state) {
    InventoryParams p = sized(static_cast<int>(state.range(0)));
    FiniteMdp m = build_inventory(p);
    WeightFn w = build_weight(p, 1.5e-2, m.num_states());
    for (auto _ : state) {
        StabilityCert cert = kappa_model(m, w);
        benchmark::DoNotOptimize(cert.kappa);
    }
}

}  // namespace

BENCHMARK(bench_backup_parallel)->Arg(100)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_backup_serial)->Arg(100)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_vi_parallel)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_vi_serial)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_kappa_model)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
