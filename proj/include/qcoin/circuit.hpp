#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "qcoin/markov.hpp"
#include "qcoin/quantum_model.hpp"

namespace qcoin {

enum class Polarization : int { H = 0, V = 1 };

// Single photon over (time bin, polarization) after `steps_applied` blocks.
// Amplitudes are stored post-selected and renormalized; index = 2 * bin + pol.
// Bin b holds the outcome string whose bit (k-1) is x_k, i.e. arrival time
// sum_k x_k * t_k with t_k = 2^k ns.
class PhotonState {
 public:
  PhotonState(int steps_applied, std::vector<cplx> amplitudes, double success_probability);

  int steps_applied() const { return steps_applied_; }
  std::size_t bins() const { return amplitudes_.size() / 2; }
  double success_probability() const { return success_probability_; }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  cplx amplitude(std::size_t bin, Polarization pol) const {
    return amplitudes_[2 * bin + static_cast<std::size_t>(pol)];
  }

 private:
  int steps_applied_;
  std::vector<cplx> amplitudes_;
  double success_probability_;
};

// One processor block: PBS, short/long delay, wave plate per path preparing
// |S0> (short) or |S1> (long), then the 50:50 recombination.
struct BlockSpec {
  PerturbedCoin coin;
};

PhotonState prepare_input(const PerturbedCoin& coin, CausalStateId start);

// Post-selected on the retained beam-splitter arm and renormalized.
PhotonState apply_block(const PhotonState& state, const BlockSpec& block);

// Both output arms of the recombining beam splitter for one block applied to
// the (unit-norm) `state`, before post-selection. Squared norms add up to 1.
struct BeamSplitterArms {
  std::vector<cplx> retained;
  std::vector<cplx> discarded;
};

BeamSplitterArms apply_block_both_arms(const PhotonState& state, const BlockSpec& block);

PhotonState run_circuit(const PerturbedCoin& coin, CausalStateId start, int steps);

double arrival_time_ns(std::uint32_t bin, int steps);

struct ArrivalTimes {
  OutcomeDistribution distribution;
  std::vector<double> times_ns;
};

ArrivalTimes arrival_time_distribution(const PhotonState& state);

// Normalized polarization state in the bin of `bits`; EmptyBin if unpopulated.
DensityMatrix2 conditional_polarization(const PhotonState& state, std::string_view bits);
DensityMatrix2 conditional_polarization(const PhotonState& state, std::uint32_t bin);

// Ensemble d0 * sum_x p(x|S0) rho_pol|S0,x + d1 * sum_x p(x|S1) rho_pol|S1,x built
// from simulated circuit outputs.
DensityMatrix2 reconstruct_memory_density(const PerturbedCoin& coin,
                                          const StationaryWeights& weights, int steps);

// Largest deviation between the block map on (memory, ancilla) and the gate
// sequence controlled-X, R on memory, controlled-V (ancilla control) with real
// rotations R|0> = |S0>, V R|1> = |S1>. Checked on both memory inputs with
// the ancilla in |0>, the only inputs the block realizes.
double gate_decomposition_deviation(const PerturbedCoin& coin);

}  // namespace qcoin
