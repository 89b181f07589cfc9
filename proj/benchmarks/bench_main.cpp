#include <benchmark/benchmark.h>

#include "aoikit/dist.hpp"
#include "aoikit/paths.hpp"
#include "aoikit/policies.hpp"
#include "aoikit/renewal.hpp"
#include "aoikit/workload.hpp"

namespace {

using namespace aoikit;

void BM_GenerateWorkload(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_workload(Dist::exponential(1.0), Dist::exponential(1.0), n, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateWorkload)->Arg(100000);

void BM_SimulatePolicy(benchmark::State& state) {
  const PolicyKind policies[] = {PolicyKind::pushout(), PolicyKind::blocking(), PolicyKind::pushout_two(),
                                 PolicyKind::fifo(), PolicyKind::preemptive_lifo()};
  const PolicyKind p = policies[state.range(0)];
  Workload w = generate_workload(Dist::exponential(1.0), Dist::exponential(1.0), 100000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, w));
  state.SetLabel(p.name());
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SimulatePolicy)->DenseRange(0, 4);

void BM_PathStats(benchmark::State& state) {
  Workload w = generate_workload(Dist::exponential(1.0), Dist::exponential(1.0), 100000, 7);
  OutcomeSeq o = simulate(PolicyKind::pushout(), w);
  Window win = default_window(w, o);
  const double u[] = {0.5, 1.0, 2.0};
  for (auto _ : state) {
    DriftPath a = extract_alpha(w, o, win);
    StepPath b = extract_beta(w, o, win);
    benchmark::DoNotOptimize(compute_stats(a, u, {}));
    benchmark::DoNotOptimize(compute_stats(b, u, {}));
  }
}
BENCHMARK(BM_PathStats);

void BM_RenewalFunctions(benchmark::State& state) {
  SolverOptions opts;
  opts.h = 1.0 / static_cast<double>(state.range(0));
  opts.t_max = 20.0;
  Dist tau = Dist::uniform(0.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(renewal_functions(tau, Dist::exponential(1.0), 1.0, opts));
}
BENCHMARK(BM_RenewalFunctions)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
