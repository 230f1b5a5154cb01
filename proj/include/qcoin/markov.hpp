#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qcoin {

// Causal state of the perturbed coin; identified with the last emitted symbol.
enum class CausalStateId : std::uint8_t { S0 = 0, S1 = 1 };

inline constexpr int index_of(CausalStateId id) { return static_cast<int>(id); }
inline constexpr CausalStateId causal_state_after(int symbol) {
  return symbol == 0 ? CausalStateId::S0 : CausalStateId::S1;
}
std::string to_string(CausalStateId id);
CausalStateId parse_causal_state(std::string_view text);

// Two-state Markov process: stays in heads with probability l, in tails with m.
class PerturbedCoin {
 public:
  PerturbedCoin(double l, double m);

  double l() const { return l_; }
  double m() const { return m_; }

  bool operator==(const PerturbedCoin&) const = default;

 private:
  double l_;
  double m_;
};

// Entry (i, j): probability of emitting j from causal state S_i.
using TransitionMatrix = std::array<std::array<double, 2>, 2>;

TransitionMatrix transition_matrix(const PerturbedCoin& coin);

// Outcome strings x1...xM are stored by index with bit (k-1) holding x_k, so x1
// is the least significant bit of the index and the leftmost character of the
// printed bitstring. The same index is the photon time bin.
std::string bitstring(std::uint32_t index, int steps);
std::uint32_t bitstring_index(std::string_view bits);

class OutcomeDistribution {
 public:
  OutcomeDistribution(int steps, std::vector<double> probabilities);

  int steps() const { return steps_; }
  std::size_t size() const { return probabilities_.size(); }
  const std::vector<double>& probabilities() const { return probabilities_; }
  double operator[](std::uint32_t index) const { return probabilities_[index]; }
  double at(std::string_view bits) const;

  // Marginal over the last outcome: the (steps - 1)-step distribution.
  OutcomeDistribution drop_last_step() const;

 private:
  int steps_;
  std::vector<double> probabilities_;
};

enum class WeightMethod { ExactStationary, PaperThreeStep, Explicit };

std::string to_string(WeightMethod method);
WeightMethod parse_weight_method(std::string_view text);

struct StationaryWeights {
  double d0;
  double d1;
  WeightMethod method;

  static StationaryWeights explicit_weights(double d0);
};

// Throws ReducibleChain for l = m = 1, where no unique stationary state exists.
StationaryWeights stationary_weights(const PerturbedCoin& coin, WeightMethod method);

double binary_entropy(double p);

// Shannon entropy of the causal-state occupation, in bits.
double classical_complexity(const StationaryWeights& weights);

double trajectory_probability(const PerturbedCoin& coin, CausalStateId start,
                              std::uint32_t index, int steps);
double trajectory_probability(const PerturbedCoin& coin, CausalStateId start,
                              std::string_view bits);

// Exact distribution over all 2^steps futures by enumeration (steps <= 20).
OutcomeDistribution future_distribution(const PerturbedCoin& coin, CausalStateId start,
                                        int steps);

struct OutcomeCounts {
  int steps;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  OutcomeDistribution frequencies() const;
};

// Monte Carlo simulation of the chain, one trajectory at a time. Counts depend
// only on (coin, start, steps, n, seed), not on the thread count.
OutcomeCounts sample_trajectories(const PerturbedCoin& coin, CausalStateId start, int steps,
                                  std::uint64_t n, std::uint64_t seed);

// Bhattacharyya coefficient sum_x sqrt(p_x q_x).
double classical_fidelity(const OutcomeDistribution& p, const OutcomeDistribution& q);

}  // namespace qcoin
