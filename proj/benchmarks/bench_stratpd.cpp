#include <benchmark/benchmark.h>

#include <cstdint>

#include "stratx/catstratpd.hpp"
#include "stratx/dataset.hpp"
#include "stratx/stratify.hpp"
#include "stratx/stratpd.hpp"
#include "stratx/synth.hpp"

namespace {

using namespace stratx;

void BM_FitStratification(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Dataset ds = gen_bodyweight(n, 1);
    const Dataset rest = drop_column(ds, ds.column_index("height"));
    for (auto _ : state) {
        StratTree tree = fit_stratification(rest, StratifyParams{});
        benchmark::DoNotOptimize(tree);
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_FitStratification)->Arg(1000)->Arg(10000)->Arg(30000)
    ->Unit(benchmark::kMillisecond)->Complexity();

void BM_StratPD(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Dataset ds = gen_bodyweight(n, 1);
    const std::size_t j = ds.column_index("height");
    for (auto _ : state) {
        PDCurve curve = stratpd(ds, j, StratPDParams{});
        benchmark::DoNotOptimize(curve);
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_StratPD)->Arg(1000)->Arg(10000)->Arg(30000)
    ->Unit(benchmark::kMillisecond)->Complexity();

void BM_CatStratPD(benchmark::State& state) {
    const auto reps = static_cast<std::size_t>(state.range(0));
    const Dataset ds = gen_weather(reps, 1);
    const std::size_t j = ds.column_index("state");
    for (auto _ : state) {
        CatEffect effect = catstratpd(ds, j, CatStratPDParams{});
        benchmark::DoNotOptimize(effect);
    }
}
BENCHMARK(BM_CatStratPD)->Arg(1)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
