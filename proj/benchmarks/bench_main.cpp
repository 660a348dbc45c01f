#include <benchmark/benchmark.h>

#include "netstab/analysis.hpp"
#include "netstab/dde.hpp"

namespace {

netstab::ModelParams reference(double b) {
  netstab::ModelParams p;
  p.a = 1.5;
  p.b = b;
  return p;
}

const netstab::CapacityLaw kAvq = netstab::CapacityLaw::affine(5.0, 1.0);

void BM_Integrate(benchmark::State& state) {
  const auto p = reference(0.2);
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto tr = netstab::integrate(p, kAvq, netstab::make_history(step, p.max_delay(), 1.0), 200.0, step);
    benchmark::DoNotOptimize(tr.samples.back().x);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(200.0 / step));
}
BENCHMARK(BM_Integrate)->Arg(25)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_CheckTheorem2(benchmark::State& state) {
  const auto p = reference(0.2);
  const int grid_n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto report = netstab::check_theorem2(p, kAvq, {0.5, 3.0}, grid_n);
    benchmark::DoNotOptimize(report.min_margin);
  }
}
BENCHMARK(BM_CheckTheorem2)->Arg(256)->Arg(4096);

void BM_LyapunovSamples(benchmark::State& state) {
  const auto p = reference(0.2);
  const auto eq = netstab::solve_equilibrium(p, kAvq);
  const auto tr = netstab::integrate(p, kAvq, netstab::make_history(0.01, p.max_delay(), 1.0), 200.0, 0.01);
  for (auto _ : state) {
    auto v = netstab::sample_lyapunov(tr, p, eq);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_LyapunovSamples)->Unit(benchmark::kMillisecond);

void BM_SolveEquilibrium(benchmark::State& state) {
  const auto p = reference(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(netstab::solve_equilibrium(p, kAvq).x_star);
}
BENCHMARK(BM_SolveEquilibrium);

}  // namespace

BENCHMARK_MAIN();
