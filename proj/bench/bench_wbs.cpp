// Serial reference WBS against the parallel kernel on one noisy series.

#include "wildseg/segmentation.hpp"
#include "wildseg/signals.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace wildseg;

struct Fixture {
    TimeSeries x;
    IntervalSet draws;
};

Fixture make_fixture(Index length, std::size_t count) {
    SimulationConfig config;
    config.N_avg = 10.0;
    config.sigma2_jmp = 4.0;
    config.length = length;
    config.seed = 7;
    return {add_noise(random_signal(config).evaluate(), 1.0, 8), draw_intervals(length, count, 9)};
}

void BM_ReferenceWbs(benchmark::State &state) {
    const Fixture f = make_fixture(state.range(0), static_cast<std::size_t>(state.range(1)));
    DetectionParams params;
    params.M = f.draws.size();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::wbs(f.x, params, f.draws));
    }
}

void BM_ParallelWbs(benchmark::State &state) {
    const Fixture f = make_fixture(state.range(0), static_cast<std::size_t>(state.range(1)));
    DetectionParams params;
    params.M = f.draws.size();
    for (auto _ : state) {
        benchmark::DoNotOptimize(wbs(f.x, params, f.draws));
    }
}

} // namespace

BENCHMARK(BM_ReferenceWbs)->Args({500, 1000})->Args({2000, 5000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelWbs)->Args({500, 1000})->Args({2000, 5000})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
