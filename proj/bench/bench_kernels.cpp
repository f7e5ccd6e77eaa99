#include <benchmark/benchmark.h>

#include <random>

#include "homi/kernels.hpp"

namespace {

using homi::Matrix;
namespace k = homi::kernels;

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.values()) v = u(rng);
  return m;
}

template <Matrix (*Kernel)(const Matrix&, const Matrix&)>
void product(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

template <Matrix (*Kernel)(const Matrix&)>
void correlation(benchmark::State& state) {
  // Instance-by-instance correlation of an n×72 feature matrix.
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(n, 72, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * 72));
}

BENCHMARK(product<k::serial::matmul>)->Name("matmul/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(product<k::parallel::matmul>)->Name("matmul/parallel")->RangeMultiplier(2)->Range(64, 512)->UseRealTime();
BENCHMARK(product<k::serial::matmul_tn>)->Name("matmul_tn/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(product<k::parallel::matmul_tn>)
    ->Name("matmul_tn/parallel")
    ->RangeMultiplier(2)
    ->Range(64, 512)
    ->UseRealTime();
BENCHMARK(correlation<k::serial::row_correlation>)->Name("row_correlation/serial")->Arg(600)->Arg(2400);
BENCHMARK(correlation<k::parallel::row_correlation>)
    ->Name("row_correlation/parallel")
    ->Arg(600)
    ->Arg(2400)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
