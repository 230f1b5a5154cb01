#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qcoin/markov.hpp"

namespace qcoin {

using cplx = std::complex<double>;

// Polarization / memory qubit amplitudes over {|0>, |1>} (equivalently {|H>, |V>}).
struct CausalStateVector {
  std::array<cplx, 2> amplitudes;

  cplx operator[](int i) const { return amplitudes[static_cast<std::size_t>(i)]; }
};

class DensityMatrix2 {
 public:
  using Entries = std::array<std::array<cplx, 2>, 2>;

  // Validates Hermiticity, unit trace and positivity.
  explicit DensityMatrix2(const Entries& entries);

  static DensityMatrix2 projector(const CausalStateVector& state);

  const Entries& entries() const { return entries_; }
  cplx operator()(int row, int col) const {
    return entries_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  }

  // Eigenvalues (descending), clamped to [0, 1].
  std::array<double, 2> eigenvalues() const;

 private:
  Entries entries_;
};

double max_abs_difference(const DensityMatrix2& a, const DensityMatrix2& b);

struct ProcessSpec {
  PerturbedCoin coin;
  std::string label;
};

// Joint state of outcome register and memory after `steps` steps:
// sum_x sqrt(p(x)) |x> |S_{x_M}>. Index = 2 * outcome_index + memory_index.
class IdealOutputState {
 public:
  IdealOutputState(int steps, std::vector<cplx> amplitudes);

  int steps() const { return steps_; }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  cplx amplitude(std::uint32_t outcome, int memory) const {
    return amplitudes_[2 * outcome + static_cast<std::size_t>(memory)];
  }
  cplx amplitude(std::string_view bits, int memory) const;

 private:
  int steps_;
  std::vector<cplx> amplitudes_;
};

// |S0> = sqrt(l)|0> + sqrt(1-l)|1>,  |S1> = sqrt(1-m)|0> + sqrt(m)|1>
CausalStateVector causal_state(const PerturbedCoin& coin, CausalStateId id);

// <S_a|S_b> for real nonnegative causal states, from the transition probabilities.
double causal_overlap(const PerturbedCoin& coin_a, CausalStateId id_a, const PerturbedCoin& coin_b,
                      CausalStateId id_b);

DensityMatrix2 memory_density(const PerturbedCoin& coin, const StationaryWeights& weights);

// -Tr(rho log2 rho). Throws NonPhysicalState for eigenvalues below -1e-9.
double von_neumann_entropy(const DensityMatrix2& rho);

IdealOutputState ideal_output_state(const PerturbedCoin& coin, CausalStateId start, int steps);

// sum_x sqrt(pA(x) pB(x)) <S_{x_M}|T_{x_M}>
double output_overlap(const ProcessSpec& a, CausalStateId start_a, const ProcessSpec& b,
                      CausalStateId start_b, int steps);

// Classical Bhattacharyya coefficient of the two future distributions.
double bhattacharyya_futures(const ProcessSpec& a, CausalStateId start_a, const ProcessSpec& b,
                             CausalStateId start_b, int steps);

// Real part of an overlap after checking the imaginary residue is below 1e-12.
double real_overlap(cplx overlap);

}  // namespace qcoin
