// OpenMP kernels against the serial references. Run with OMP_NUM_THREADS set
// to compare thread counts; the serial rows are the baseline.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "qcoin/kernels.hpp"

using namespace qcoin;

namespace {

const TransitionMatrix kT = transition_matrix(PerturbedCoin(0.397, 0.685));

std::vector<kernels::cplx> amplitudes(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<kernels::cplx> v(n);
  for (auto& z : v) z = {g(rng), 0.0};
  return v;
}

template <bool Parallel>
void BM_EnumerateFutures(benchmark::State& state) {
  const int steps = static_cast<int>(state.range(0));
  std::vector<double> out(std::size_t{1} << steps);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::enumerate_futures(kT, 1, steps, out);
    } else {
      kernels::serial::enumerate_futures(kT, 1, steps, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel>
void BM_ApplyBlock(benchmark::State& state) {
  const auto bins = static_cast<std::size_t>(state.range(0));
  const auto in = amplitudes(2 * bins);
  std::vector<kernels::cplx> out(4 * bins);
  const kernels::Polarization s0{{{0.63, 0.0}, {0.77, 0.0}}};
  const kernels::Polarization s1{{{0.56, 0.0}, {0.83, 0.0}}};
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::apply_block(in, bins, s0, s1, 0.5, out);
    } else {
      kernels::serial::apply_block(in, bins, s0, s1, 0.5, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(bins));
}

template <bool Parallel>
void BM_SampleCounts(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::vector<std::uint64_t> counts(8);
  for (auto _ : state) {
    std::fill(counts.begin(), counts.end(), 0);
    if constexpr (Parallel) {
      kernels::sample_counts(kT, 1, 3, n, 7, counts);
    } else {
      kernels::serial::sample_counts(kT, 1, 3, n, 7, counts);
    }
    benchmark::DoNotOptimize(counts.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_InnerProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = amplitudes(n);
  const auto b = amplitudes(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(kernels::inner_product(a, b));
    } else {
      benchmark::DoNotOptimize(kernels::serial::inner_product(a, b));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_EnumerateFutures<false>)->Name("enumerate_futures/serial")->DenseRange(12, 20, 4);
BENCHMARK(BM_EnumerateFutures<true>)->Name("enumerate_futures/omp")->DenseRange(12, 20, 4)->UseRealTime();
BENCHMARK(BM_ApplyBlock<false>)->Name("apply_block/serial")->RangeMultiplier(16)->Range(256, 1 << 20);
BENCHMARK(BM_ApplyBlock<true>)->Name("apply_block/omp")->RangeMultiplier(16)->Range(256, 1 << 20)->UseRealTime();
BENCHMARK(BM_SampleCounts<false>)->Name("sample_counts/serial")->Arg(1 << 20);
BENCHMARK(BM_SampleCounts<true>)->Name("sample_counts/omp")->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_InnerProduct<false>)->Name("inner_product/serial")->RangeMultiplier(16)->Range(256, 1 << 20);
BENCHMARK(BM_InnerProduct<true>)->Name("inner_product/omp")->RangeMultiplier(16)->Range(256, 1 << 20)->UseRealTime();

BENCHMARK_MAIN();
