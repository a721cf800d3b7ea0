// Reduced parallel exploration against the serial every-schedule reference.

#include "mailbox/explorer.hpp"

#include <benchmark/benchmark.h>

namespace {

mailbox::ExploreConfig bounds(const benchmark::State& state) {
    mailbox::ExploreConfig cfg;
    cfg.max_delivers = static_cast<std::uint32_t>(state.range(0));
    cfg.max_checks = static_cast<std::uint32_t>(state.range(1));
    return cfg;
}

void BM_Explore(benchmark::State& state) {
    const auto cfg = bounds(state);
    std::uint64_t schedules = 0;
    for (auto _ : state) {
        schedules = mailbox::explore(cfg).schedules;
        benchmark::DoNotOptimize(schedules);
    }
    state.counters["schedules"] = static_cast<double>(schedules);
    state.counters["schedules/s"] =
        benchmark::Counter(static_cast<double>(schedules) * state.iterations(),
                           benchmark::Counter::kIsRate);
}

void BM_ExploreReference(benchmark::State& state) {
    const auto cfg = bounds(state);
    std::uint64_t schedules = 0;
    for (auto _ : state) {
        schedules = mailbox::explore_reference(cfg).schedules;
        benchmark::DoNotOptimize(schedules);
    }
    state.counters["schedules"] = static_cast<double>(schedules);
    state.counters["schedules/s"] =
        benchmark::Counter(static_cast<double>(schedules) * state.iterations(),
                           benchmark::Counter::kIsRate);
}

} // namespace

BENCHMARK(BM_Explore)->Args({1, 1})->Args({1, 3})->Args({2, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploreReference)
    ->Args({1, 1})
    ->Args({1, 3})
    ->Args({2, 2})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Explore)->Args({3, 5})->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
