#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// library and a serial reference in kernels::serial that the tests and the
// benchmark compare against. Elementwise and counting kernels match the
// reference bitwise; reductions agree to rounding.

#include <array>
#include <complex>
#include <cstdint>
#include <span>

#include "qcoin/markov.hpp"

namespace qcoin::kernels {

using cplx = std::complex<double>;
using Polarization = std::array<cplx, 2>;

// Loops shorter than this run serially even in the parallel kernels.
inline constexpr std::size_t kParallelThreshold = 1024;

// Trajectories per independently seeded sampling chunk.
inline constexpr std::uint64_t kSampleChunk = 1u << 16;

// out[i] = probability of outcome string i (bit k-1 = x_k); out.size() == 2^steps.
void enumerate_futures(const TransitionMatrix& t, int start, int steps, std::span<double> out);

// One processor block on a bin-major amplitude array (index = 2*bin + pol).
// `in` holds `bins` time bins; `out` holds 2*bins. H amplitude of bin b moves to
// bin b with polarization `short_pol`; V amplitude moves to bin b + bins with
// polarization `long_pol`. Each term carries `arm_factor`.
void apply_block(std::span<const cplx> in, std::size_t bins, const Polarization& short_pol,
                 const Polarization& long_pol, cplx arm_factor, std::span<cplx> out);

// Adds chain-simulated outcome counts for n trajectories into `counts`.
void sample_counts(const TransitionMatrix& t, int start, int steps, std::uint64_t n,
                   std::uint64_t seed, std::span<std::uint64_t> counts);

// <a|b> = sum conj(a_i) b_i
cplx inner_product(std::span<const cplx> a, std::span<const cplx> b);

double squared_norm(std::span<const cplx> a);

namespace serial {

void enumerate_futures(const TransitionMatrix& t, int start, int steps, std::span<double> out);
void apply_block(std::span<const cplx> in, std::size_t bins, const Polarization& short_pol,
                 const Polarization& long_pol, cplx arm_factor, std::span<cplx> out);
void sample_counts(const TransitionMatrix& t, int start, int steps, std::uint64_t n,
                   std::uint64_t seed, std::span<std::uint64_t> counts);
cplx inner_product(std::span<const cplx> a, std::span<const cplx> b);
double squared_norm(std::span<const cplx> a);

}  // namespace serial

}  // namespace qcoin::kernels
