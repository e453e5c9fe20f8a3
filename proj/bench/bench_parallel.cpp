// Serial reference vs OpenMP kernels: replicate batches and lagged correlation.

#include <benchmark/benchmark.h>

#include <vector>

#include "townsim/scenario.hpp"
#include "townsim/stats.hpp"

namespace {

townsim::ScenarioConfig bench_config() {
    townsim::ScenarioConfig c;
    c.days = 360;
    return c;
}

void BM_ReplicatesSerial(benchmark::State& state) {
    const auto config = bench_config();
    const auto net = townsim::build_network(config);
    const auto outside = townsim::build_outside_trajectory(config);
    const auto seeds = townsim::replicate_seeds(config, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(townsim::run_replicates_serial(config, seeds, net, outside));
}
BENCHMARK(BM_ReplicatesSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ReplicatesOpenMP(benchmark::State& state) {
    const auto config = bench_config();
    const auto net = townsim::build_network(config);
    const auto outside = townsim::build_outside_trajectory(config);
    const auto seeds = townsim::replicate_seeds(config, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(townsim::run_replicates(config, seeds, net, outside));
}
BENCHMARK(BM_ReplicatesOpenMP)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

std::vector<double> noise_series(std::size_t n, std::uint64_t seed) {
    townsim::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v)
        x = rng.normal();
    return v;
}

void BM_CcfSerial(benchmark::State& state) {
    const auto x = noise_series(4000, 1), y = noise_series(4000, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(townsim::stats::cross_correlation_serial(x, y, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CcfSerial)->Arg(100)->Arg(400);

void BM_CcfOpenMP(benchmark::State& state) {
    const auto x = noise_series(4000, 1), y = noise_series(4000, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(townsim::stats::cross_correlation(x, y, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CcfOpenMP)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
