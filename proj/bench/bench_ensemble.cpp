// Serial reference loop versus the OpenMP ensemble kernel, per method.

#include <benchmark/benchmark.h>

#include "ahdyn/ensemble.hpp"
#include "ahdyn/spectral.hpp"

using namespace ahdyn;

namespace {

MethodConfig method(std::int64_t m) {
    MethodConfig c;
    c.method = all_methods[m];
    return c;
}

EnsembleConfig workload() {
    EnsembleConfig e;
    e.n_traj = 256;
    e.t_final = 2000.0;
    e.seed = 1;
    return e;
}

void set_counters(benchmark::State& state, const EnsembleConfig& e, const MethodConfig& mc) {
    state.SetLabel(std::string(method_name(mc.method)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.n_traj * e.n_steps(mc.dt)));
}

void BM_Serial(benchmark::State& state) {
    const ModelParams p;
    const auto bath = BathSpec::single(0.01, 0.0, 0.05);
    const auto mc = method(state.range(0));
    const auto e = workload();
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble_serial(p, bath, mc, e));
    set_counters(state, e, mc);
}

void BM_Parallel(benchmark::State& state) {
    const ModelParams p;
    const auto bath = BathSpec::single(0.01, 0.0, 0.05);
    const auto mc = method(state.range(0));
    const auto e = workload();
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(p, bath, mc, e, workers));
    set_counters(state, e, mc);
    state.counters["workers"] = workers;
}

void BM_FittedAmplitude(benchmark::State& state) {
    const ModelParams p;
    const auto bath = BathSpec::single(state.range(0) == 0 ? 0.01 : 0.001, 0.0, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(fitted_amplitude(p, bath, -9.4, 1.0));
}

}  // namespace

BENCHMARK(BM_Serial)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->ArgsProduct({{0, 1, 2, 3, 4}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FittedAmplitude)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
