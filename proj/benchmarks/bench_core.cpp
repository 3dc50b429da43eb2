#include <benchmark/benchmark.h>

#include "salem/construction.hpp"
#include "salem/energy.hpp"
#include "salem/exp_sum.hpp"
#include "salem/norms.hpp"

namespace {

const salem::Construction& desk() {
  static const salem::Construction c = [] {
    salem::ParamOverrides o;
    o.j_max = 5;
    o.seed = 7;
    return salem::build_construction(salem::derive_params(4, 2, 1, o));
  }();
  return c;
}

// Full period of S_{A_j}: naive per-k sums against one FFT.
void BM_ExpSumNaive(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const auto& atoms = desk().levels[static_cast<std::size_t>(j)].atoms;
  const salem::Int period = salem::ipow(16, j);
  for (auto _ : state) {
    salem::Complex acc{0, 0};
    for (salem::Int k = 0; k < period; ++k) acc += salem::exp_sum(atoms, k, period);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ExpSumNaive)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ExpSumFft(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const auto& atoms = desk().levels[static_cast<std::size_t>(j)].atoms;
  const salem::Int period = salem::ipow(16, j);
  for (auto _ : state) benchmark::DoNotOptimize(salem::exp_sum_all(atoms, period));
}
BENCHMARK(BM_ExpSumFft)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_SumDistribution(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const auto& atoms = desk().levels[5].atoms;
  for (auto _ : state) benchmark::DoNotOptimize(salem::sum_distribution(atoms, r).M);
}
BENCHMARK(BM_SumDistribution)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_SumDistributionSparse(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const auto& atoms = desk().levels[3].atoms;
  for (auto _ : state) benchmark::DoNotOptimize(salem::sum_distribution(atoms, r, 1).M);
}
BENCHMARK(BM_SumDistributionSparse)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_Quadrature(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(salem::lp_norm_quadrature(desk(), j, 1, 3.0).value);
}
BENCHMARK(BM_Quadrature)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
