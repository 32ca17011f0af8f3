#include <benchmark/benchmark.h>

#include <numeric>

#include "npfp/config.hpp"
#include "npfp/sweep.hpp"

using namespace npfp;

namespace {

Config orin() {
    auto cfg = load_config(std::string(NPFP_SOURCE_DIR) + "/configs/orin_four_task.json");
    return cfg;
}

std::vector<std::uint64_t> seeds(std::int64_t n) {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 0);
    return s;
}

const std::vector<PolicyVariant> kPolicies{variants::C, variants::C_BF, variants::BC_F, variants::BC_BF};

void BM_SweepSerial(benchmark::State& state) {
    const auto cfg = orin();
    const auto s = seeds(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(cfg, s, kPolicies));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(kPolicies.size()));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto cfg = orin();
    const auto s = seeds(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep_parallel(cfg, s, kPolicies));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(kPolicies.size()));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
