#include <benchmark/benchmark.h>

#include "levylab/fixed_point.hpp"
#include "levylab/kernel_spectrum.hpp"
#include "levylab/matrix_model.hpp"
#include "levylab/stable_random.hpp"

using namespace levylab;

static void BM_StableSample(benchmark::State& state) {
  const StableLaw law(state.range(0) / 10.0);
  RngStream rng = derive_stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_standard_stable(law, rng));
}
BENCHMARK(BM_StableSample)->Arg(5)->Arg(10)->Arg(15);

static void BM_Eigendecompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = build_levy_matrix(n, 1.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(a));
}
BENCHMARK(BM_Eigendecompose)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_EvalG(benchmark::State& state) {
  const auto g = gamma_zero(1.0, angular_grid(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(eval_G(cplx(0.1, 0.2), g));
}
BENCHMARK(BM_EvalG)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

static void BM_AssembleP(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(assemble_P(1.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AssembleP)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
