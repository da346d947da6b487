#include <benchmark/benchmark.h>

#include "basinctl/bench.hpp"
#include "basinctl/controller.hpp"
#include "basinctl/integrator.hpp"

namespace {

using namespace basinctl;

// One variational pass over the default closest-approach window.
void BM_VariationalPass(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = generate_instance(n, 1);
  for (auto _ : state) {
    auto var = integrate_variational(inst.system, inst.y0, 0.01, 10.0);
    benchmark::DoNotOptimize(var.matrices.back().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VariationalPass)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ConvergenceTest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = generate_instance(n, 1);
  const ControlParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(test_convergence(inst.system, inst.y0, inst.yt, params));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvergenceTest)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond)->Complexity();

// Full control run on a generated instance.
void BM_Control(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = generate_instance(n, 1);
  const ControlParams params;
  for (auto _ : state) {
    auto out = control(inst.system, inst.y0, inst.yt, inst.cs, params);
    benchmark::DoNotOptimize(out.n_iter);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Control)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond)->Iterations(1)->Complexity();

}  // namespace

BENCHMARK_MAIN();
