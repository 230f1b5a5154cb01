#include "qcoin/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcoin/errors.hpp"
#include "qcoin/kernels.hpp"
#include "qcoin/tolerances.hpp"

namespace qcoin {

namespace {

double checked_probability(double p, const char* name) {
  if (!std::isfinite(p) || p < -kTol.probability_range || p > 1.0 + kTol.probability_range) {
    throw InvalidParameter(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

void check_steps(int steps, int max_steps) {
  if (steps < 1) throw InvalidParameter("step count must be at least 1");
  if (steps > max_steps) {
    throw StepCountTooLarge("step count " + std::to_string(steps) + " exceeds limit " +
                            std::to_string(max_steps));
  }
}

// Probability that the third outcome is `symbol`, starting from `start`.
double third_step_marginal(const PerturbedCoin& coin, CausalStateId start, int symbol) {
  const auto dist = future_distribution(coin, start, 3);
  double sum = 0.0;
  for (std::uint32_t i = 0; i < dist.size(); ++i) {
    if (static_cast<int>((i >> 2) & 1u) == symbol) sum += dist[i];
  }
  return sum;
}

}  // namespace

std::string to_string(CausalStateId id) { return id == CausalStateId::S0 ? "S0" : "S1"; }

CausalStateId parse_causal_state(std::string_view text) {
  if (text == "S0" || text == "0") return CausalStateId::S0;
  if (text == "S1" || text == "1") return CausalStateId::S1;
  throw InvalidParameter("unknown causal state '" + std::string(text) + "'");
}

PerturbedCoin::PerturbedCoin(double l, double m)
    : l_(checked_probability(l, "l")), m_(checked_probability(m, "m")) {}

TransitionMatrix transition_matrix(const PerturbedCoin& coin) {
  return {{{coin.l(), 1.0 - coin.l()}, {1.0 - coin.m(), coin.m()}}};
}

std::string bitstring(std::uint32_t index, int steps) {
  std::string bits(static_cast<std::size_t>(steps), '0');
  for (int k = 0; k < steps; ++k) {
    if ((index >> k) & 1u) bits[static_cast<std::size_t>(k)] = '1';
  }
  return bits;
}

std::uint32_t bitstring_index(std::string_view bits) {
  if (bits.empty() || bits.size() > 32) throw InvalidParameter("bitstring length out of range");
  std::uint32_t index = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      index |= 1u << k;
    } else if (bits[k] != '0') {
      throw InvalidParameter("bitstring may only contain '0' and '1': " + std::string(bits));
    }
  }
  return index;
}

OutcomeDistribution::OutcomeDistribution(int steps, std::vector<double> probabilities)
    : steps_(steps), probabilities_(std::move(probabilities)) {
  if (steps_ < 1 || steps_ > kMaxEnumerationSteps) {
    throw InvalidParameter("outcome distribution step count out of range");
  }
  if (probabilities_.size() != (std::size_t{1} << steps_)) {
    throw DimensionMismatch("outcome distribution needs 2^steps entries");
  }
}

double OutcomeDistribution::at(std::string_view bits) const {
  if (static_cast<int>(bits.size()) != steps_) {
    throw DimensionMismatch("bitstring length does not match step count");
  }
  return probabilities_[bitstring_index(bits)];
}

OutcomeDistribution OutcomeDistribution::drop_last_step() const {
  if (steps_ < 2) throw InvalidParameter("cannot marginalize a one-step distribution");
  const std::size_t half = probabilities_.size() / 2;
  std::vector<double> marginal(half);
  for (std::size_t i = 0; i < half; ++i) marginal[i] = probabilities_[i] + probabilities_[i + half];
  return {steps_ - 1, std::move(marginal)};
}

std::string to_string(WeightMethod method) {
  switch (method) {
    case WeightMethod::ExactStationary:
      return "exact";
    case WeightMethod::PaperThreeStep:
      return "three_step";
    case WeightMethod::Explicit:
      return "explicit";
  }
  return "unknown";
}

WeightMethod parse_weight_method(std::string_view text) {
  if (text == "exact") return WeightMethod::ExactStationary;
  if (text == "three_step") return WeightMethod::PaperThreeStep;
  throw InvalidParameter("unknown weight method '" + std::string(text) +
                         "' (expected exact or three_step)");
}

StationaryWeights StationaryWeights::explicit_weights(double d0) {
  const double p = checked_probability(d0, "d0");
  return {p, 1.0 - p, WeightMethod::Explicit};
}

StationaryWeights stationary_weights(const PerturbedCoin& coin, WeightMethod method) {
  double numerator = 0.0;
  double denominator = 0.0;
  switch (method) {
    case WeightMethod::ExactStationary:
      // Fixed point of pi = pi T: d0 (1 - l) = d1 (1 - m).
      numerator = 1.0 - coin.m();
      denominator = (1.0 - coin.l()) + (1.0 - coin.m());
      break;
    case WeightMethod::PaperThreeStep:
      numerator = third_step_marginal(coin, CausalStateId::S1, 0);
      denominator = third_step_marginal(coin, CausalStateId::S0, 1) + numerator;
      break;
    case WeightMethod::Explicit:
      throw InvalidParameter("explicit weights are built with StationaryWeights::explicit_weights");
  }
  if (denominator <= 0.0) {
    throw ReducibleChain("stationary weights are not unique for l = " + std::to_string(coin.l()) +
                         ", m = " + std::to_string(coin.m()));
  }
  const double d0 = numerator / denominator;
  return {d0, 1.0 - d0, method};
}

double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

double classical_complexity(const StationaryWeights& weights) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(weights.d0) + term(weights.d1);
}

double trajectory_probability(const PerturbedCoin& coin, CausalStateId start,
                              std::uint32_t index, int steps) {
  check_steps(steps, 32);
  const auto t = transition_matrix(coin);
  double p = 1.0;
  int state = index_of(start);
  for (int k = 0; k < steps; ++k) {
    const int symbol = static_cast<int>((index >> k) & 1u);
    p *= t[state][symbol];
    state = symbol;
  }
  return p;
}

double trajectory_probability(const PerturbedCoin& coin, CausalStateId start,
                              std::string_view bits) {
  return trajectory_probability(coin, start, bitstring_index(bits), static_cast<int>(bits.size()));
}

OutcomeDistribution future_distribution(const PerturbedCoin& coin, CausalStateId start,
                                        int steps) {
  check_steps(steps, kMaxEnumerationSteps);
  std::vector<double> probabilities(std::size_t{1} << steps);
  kernels::enumerate_futures(transition_matrix(coin), index_of(start), steps, probabilities);
  return {steps, std::move(probabilities)};
}

std::uint64_t OutcomeCounts::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

OutcomeDistribution OutcomeCounts::frequencies() const {
  const double n = static_cast<double>(total());
  if (n == 0.0) throw InvalidParameter("no counts");
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / n;
  return {steps, std::move(f)};
}

OutcomeCounts sample_trajectories(const PerturbedCoin& coin, CausalStateId start, int steps,
                                  std::uint64_t n, std::uint64_t seed) {
  check_steps(steps, kMaxEnumerationSteps);
  if (n == 0) throw InvalidParameter("sample count must be at least 1");
  OutcomeCounts result{steps, std::vector<std::uint64_t>(std::size_t{1} << steps, 0)};
  kernels::sample_counts(transition_matrix(coin), index_of(start), steps, n, seed, result.counts);
  return result;
}

double classical_fidelity(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.steps() != q.steps()) {
    throw DimensionMismatch("fidelity needs distributions over the same number of steps");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::sqrt(p[i] * q[i]);
  return std::min(sum, 1.0);
}

}  // namespace qcoin
