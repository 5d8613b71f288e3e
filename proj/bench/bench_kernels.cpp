// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include <cmath>

#include "ostro/fourier.hpp"
#include "ostro/model.hpp"

using namespace ostro;

namespace {

WaveProfile sample_profile(int n) {
  return WaveProfile::from_function(TorusGrid(n), [](double x) { return 0.3 * std::cos(x) + 0.05 * std::cos(2 * x); });
}

void BM_convolve_parallel(benchmark::State& state) {
  const auto f = sample_profile(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_quadrature(kernel_K, f));
}

void BM_convolve_serial(benchmark::State& state) {
  const auto f = sample_profile(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_quadrature_serial(kernel_K, f));
}

void BM_series_parallel(benchmark::State& state) {
  const auto xs = TorusGrid(256).nodes();
  const long m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_series(xs, [m](double x) { return kernel_K_series(x, m); }));
}

void BM_series_serial(benchmark::State& state) {
  const auto xs = TorusGrid(256).nodes();
  const long m = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(tabulate_series_serial(xs, [m](double x) { return kernel_K_series(x, m); }));
}

void BM_jacobian_parallel(benchmark::State& state) {
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto phi = sample_profile(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_matrix(p, 0.8, phi, true));
}

void BM_jacobian_serial(benchmark::State& state) {
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto phi = sample_profile(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_matrix_serial(p, 0.8, phi, true));
}

void BM_jacobian_direct(benchmark::State& state) {
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto phi = sample_profile(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cosine_jacobian(p, 0.8, phi));
}

}  // namespace

BENCHMARK(BM_convolve_parallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_serial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_series_parallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_series_serial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jacobian_parallel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jacobian_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jacobian_direct)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
