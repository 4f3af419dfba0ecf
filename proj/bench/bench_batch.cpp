// OpenMP batch runner against its serial reference on Scenario 1.
// Arguments: policy index into all_policy_kinds(), number of runs.

#include <benchmark/benchmark.h>

#include "mpts/harness.hpp"

namespace {

mpts::RunConfig config(const benchmark::State& state) {
    mpts::RunConfig c;
    c.instance.mus = {0.7, 0.6, 0.5, 0.4, 0.3};
    c.instance.plays = 2;
    c.policy = mpts::all_policy_kinds()[static_cast<std::size_t>(state.range(0))];
    c.horizon = 10000;
    c.n_runs = static_cast<std::uint64_t>(state.range(1));
    c.master_seed = 1;
    return c;
}

void BM_RunBatchParallel(benchmark::State& state) {
    const auto c = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(mpts::run_batch(c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_runs * c.horizon));
    state.SetLabel(std::string(mpts::policy_name(c.policy)));
}

void BM_RunBatchSerial(benchmark::State& state) {
    const auto c = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(mpts::run_batch_serial(c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_runs * c.horizon));
    state.SetLabel(std::string(mpts::policy_name(c.policy)));
}

// mp-ts, cucb, mp-kl-ucb
void policy_grid(benchmark::internal::Benchmark* b) {
    for (int policy : {0, 3, 4}) b->Args({policy, 16});
    b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_RunBatchParallel)->Apply(policy_grid);
BENCHMARK(BM_RunBatchSerial)->Apply(policy_grid);

BENCHMARK_MAIN();
