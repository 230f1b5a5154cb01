#include "qcoin/kernels.hpp"

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

namespace qcoin::kernels {

namespace {

double path_probability(const TransitionMatrix& t, int start, int steps, std::uint32_t index) {
  double p = 1.0;
  int state = start;
  for (int k = 0; k < steps; ++k) {
    const int symbol = static_cast<int>((index >> k) & 1u);
    p *= t[state][symbol];
    state = symbol;
  }
  return p;
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

// 53-bit uniform in [0, 1); fixed arithmetic so counts do not depend on the
// standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void sample_chunk(const TransitionMatrix& t, int start, int steps, std::uint64_t trajectories,
                  std::uint64_t seed, std::uint64_t chunk, std::span<std::uint64_t> counts) {
  auto rng = chunk_engine(seed, chunk);
  for (std::uint64_t n = 0; n < trajectories; ++n) {
    int state = start;
    std::uint32_t index = 0;
    for (int k = 0; k < steps; ++k) {
      const int symbol = uniform01(rng) < t[state][0] ? 0 : 1;
      index |= static_cast<std::uint32_t>(symbol) << k;
      state = symbol;
    }
    ++counts[index];
  }
}

std::uint64_t chunk_size(std::uint64_t n, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kSampleChunk;
  return std::min(kSampleChunk, n - begin);
}

}  // namespace

void enumerate_futures(const TransitionMatrix& t, int start, int steps, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (out.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = path_probability(t, start, steps, static_cast<std::uint32_t>(i));
  }
}

void apply_block(std::span<const cplx> in, std::size_t bins, const Polarization& short_pol,
                 const Polarization& long_pol, cplx arm_factor, std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(bins);
#pragma omp parallel for schedule(static) if (bins > kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < n; ++b) {
    const cplx h = arm_factor * in[2 * b];
    const cplx v = arm_factor * in[2 * b + 1];
    out[2 * b] = h * short_pol[0];
    out[2 * b + 1] = h * short_pol[1];
    out[2 * (b + n)] = v * long_pol[0];
    out[2 * (b + n) + 1] = v * long_pol[1];
  }
}

void sample_counts(const TransitionMatrix& t, int start, int steps, std::uint64_t n,
                   std::uint64_t seed, std::span<std::uint64_t> counts) {
  const auto chunks = static_cast<std::ptrdiff_t>((n + kSampleChunk - 1) / kSampleChunk);
#pragma omp parallel if (chunks > 1)
  {
    std::vector<std::uint64_t> local(counts.size(), 0);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
      const auto chunk = static_cast<std::uint64_t>(c);
      sample_chunk(t, start, steps, chunk_size(n, chunk), seed, chunk, local);
    }
#pragma omp critical
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += local[i];
  }
}

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double re = 0.0;
  double im = 0.0;
#pragma omp parallel for reduction(+ : re, im) schedule(static) if (a.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const cplx term = std::conj(a[i]) * b[i];
    re += term.real();
    im += term.imag();
  }
  return {re, im};
}

double squared_norm(std::span<const cplx> a) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static) if (a.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) sum += std::norm(a[i]);
  return sum;
}

namespace serial {

void enumerate_futures(const TransitionMatrix& t, int start, int steps, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = path_probability(t, start, steps, static_cast<std::uint32_t>(i));
  }
}

void apply_block(std::span<const cplx> in, std::size_t bins, const Polarization& short_pol,
                 const Polarization& long_pol, cplx arm_factor, std::span<cplx> out) {
  for (std::size_t b = 0; b < bins; ++b) {
    const cplx h = arm_factor * in[2 * b];
    const cplx v = arm_factor * in[2 * b + 1];
    out[2 * b] = h * short_pol[0];
    out[2 * b + 1] = h * short_pol[1];
    out[2 * (b + bins)] = v * long_pol[0];
    out[2 * (b + bins) + 1] = v * long_pol[1];
  }
}

void sample_counts(const TransitionMatrix& t, int start, int steps, std::uint64_t n,
                   std::uint64_t seed, std::span<std::uint64_t> counts) {
  const std::uint64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    sample_chunk(t, start, steps, chunk_size(n, c), seed, c, counts);
  }
}

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

double squared_norm(std::span<const cplx> a) {
  double sum = 0.0;
  for (const auto& z : a) sum += std::norm(z);
  return sum;
}

}  // namespace serial

}  // namespace qcoin::kernels
