// Serial reference against the OpenMP driver on the same block-partitioned
// Monte Carlo workload. Both produce bitwise-identical statistics.

#include <benchmark/benchmark.h>

#include <cmath>

#include "vgstein/simulate.hpp"

namespace {

vgstein::sim::KernelSpec workload(std::uint64_t m, vgstein::sim::Law law) {
  vgstein::sim::KernelSpec spec;
  spec.m = spec.n = m;
  spec.law_x = spec.law_y = law;
  spec.seed = 42;
  spec.n_samples = 1 << 20;
  spec.block_size = 1 << 14;
  spec.hs = {[](double w) { return std::cos(w); }, [](double w) { return std::tanh(w); }};
  return spec;
}

void BM_Serial(benchmark::State& state) {
  const auto law = static_cast<vgstein::sim::Law>(state.range(1));
  const auto spec = workload(static_cast<std::uint64_t>(state.range(0)), law);
  for (auto _ : state) benchmark::DoNotOptimize(vgstein::sim::simulate_serial(spec).mean[0]);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.n_samples));
}

void BM_OpenMP(benchmark::State& state) {
  const auto law = static_cast<vgstein::sim::Law>(state.range(1));
  const auto spec = workload(static_cast<std::uint64_t>(state.range(0)), law);
  const int threads = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(vgstein::sim::simulate_omp(spec, threads).mean[0]);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.n_samples));
  state.counters["threads"] = vgstein::sim::resolve_threads(threads);
}

constexpr int kRad = static_cast<int>(vgstein::sim::Law::kRademacher);
constexpr int kUni = static_cast<int>(vgstein::sim::Law::kUniformPm);

}  // namespace

BENCHMARK(BM_Serial)->Args({80, kRad})->Args({320, kRad})->Args({80, kUni})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)
    ->Args({80, kRad, 0})
    ->Args({320, kRad, 0})
    ->Args({80, kUni, 0})
    ->Args({320, kRad, 2})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
