#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcoin/circuit.hpp"
#include "qcoin/errors.hpp"

using namespace qcoin;

namespace {

using P = Polarization;

std::vector<double> grid(int n) {
  std::vector<double> v;
  for (int i = 0; i <= n; ++i) v.push_back(i / static_cast<double>(n));
  return v;
}

}  // namespace

TEST(PrepareInput, PolarizationIsCausalState) {
  const PerturbedCoin coin(0.4, 0.7);
  const auto in = prepare_input(coin, CausalStateId::S0);
  ASSERT_EQ(in.bins(), 1u);
  EXPECT_EQ(in.steps_applied(), 0);
  EXPECT_EQ(in.success_probability(), 1.0);
  EXPECT_NEAR(in.amplitude(0, P::H).real(), std::sqrt(0.4), 1e-15);
  EXPECT_NEAR(in.amplitude(0, P::V).real(), std::sqrt(0.6), 1e-15);
}

TEST(ApplyBlock, SingleBlockFromS0) {
  for (double l : {0.1, 0.4, 0.75}) {
    const PerturbedCoin coin(l, 0.3);
    const auto out = run_circuit(coin, CausalStateId::S0, 1);
    ASSERT_EQ(out.bins(), 2u);
    const auto s0 = oracle::causal(l, 0.3, 0);
    const auto s1 = oracle::causal(l, 0.3, 1);
    // bin 0 carries sqrt(l) |S0>, bin 1 carries sqrt(1 - l) |S1>
    EXPECT_NEAR(out.amplitude(0, P::H).real(), std::sqrt(l) * s0[0], 1e-15);
    EXPECT_NEAR(out.amplitude(0, P::V).real(), std::sqrt(l) * s0[1], 1e-15);
    EXPECT_NEAR(out.amplitude(1, P::H).real(), std::sqrt(1 - l) * s1[0], 1e-15);
    EXPECT_NEAR(out.amplitude(1, P::V).real(), std::sqrt(1 - l) * s1[1], 1e-15);
    EXPECT_NEAR(out.success_probability(), 0.5, 1e-12);
  }
}

TEST(ApplyBlock, TwoFairBlocksAreUniform) {
  const auto out = run_circuit(PerturbedCoin(0.5, 0.5), CausalStateId::S1, 2);
  ASSERT_EQ(out.amplitudes().size(), 8u);
  for (const auto a : out.amplitudes()) EXPECT_NEAR(a.real(), 0.35355339, 1e-8);
  EXPECT_NEAR(out.success_probability(), 0.25, 1e-12);
}

TEST(ApplyBlock, SuccessProbabilityHalvesPerBlock) {
  const PerturbedCoin coin(0.23, 0.91);
  for (int steps = 1; steps <= 6; ++steps) {
    EXPECT_NEAR(run_circuit(coin, CausalStateId::S0, steps).success_probability(),
                std::ldexp(1.0, -steps), 1e-12);
  }
}

TEST(ApplyBlock, BothArmsAccountForAllProbability) {
  const PerturbedCoin coin(0.4, 0.7);
  auto state = prepare_input(coin, CausalStateId::S1);
  for (int k = 0; k < 3; ++k) {
    const auto arms = apply_block_both_arms(state, BlockSpec{coin});
    double nr = 0.0, nd = 0.0;
    for (auto a : arms.retained) nr += std::norm(a);
    for (auto a : arms.discarded) nd += std::norm(a);
    EXPECT_NEAR(nr + nd, 1.0, 1e-12);
    EXPECT_NEAR(nr, 0.5, 1e-12);
    state = apply_block(state, BlockSpec{coin});
  }
  EXPECT_NEAR(state.success_probability(), 0.125, 1e-12);
}

TEST(ApplyBlock, StepLimit) {
  EXPECT_THROW(run_circuit(PerturbedCoin(0.5, 0.5), CausalStateId::S0, 13), StepCountTooLarge);
  EXPECT_THROW(run_circuit(PerturbedCoin(0.5, 0.5), CausalStateId::S0, 0), InvalidParameter);
}

// Circuit output against the ideal joint state, reading bin b polarization
// as the memory register of outcome b.
TEST(CircuitEquivalence, GridAgainstIdealState) {
  double worst = 0.0;
  for (double l : grid(20))
    for (double m : grid(20))
      for (int start = 0; start < 2; ++start)
        for (int steps = 1; steps <= 4; ++steps) {
          const PerturbedCoin coin(l, m);
          const auto circ = run_circuit(coin, causal_state_after(start), steps);
          const auto ideal = ideal_output_state(coin, causal_state_after(start), steps);
          ASSERT_EQ(circ.amplitudes().size(), ideal.amplitudes().size());
          for (std::size_t i = 0; i < circ.amplitudes().size(); ++i) {
            worst = std::max(worst, std::abs(circ.amplitudes()[i] - ideal.amplitudes()[i]));
          }
        }
  EXPECT_LE(worst, 1e-12);
}

TEST(CircuitEquivalence, AmplitudesAgainstRecursiveOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double l = u(rng), m = u(rng);
    const auto circ = run_circuit(PerturbedCoin(l, m), CausalStateId::S1, 3);
    for (const auto& [bits, p] : oracle::futures(l, m, 1, 3)) {
      const auto s = oracle::causal(l, m, bits.back() - '0');
      std::uint32_t bin = 0;
      for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k] == '1') bin |= 1u << k;
      EXPECT_NEAR(circ.amplitude(bin, P::H).real(), std::sqrt(p) * s[0], 1e-14);
      EXPECT_NEAR(circ.amplitude(bin, P::V).real(), std::sqrt(p) * s[1], 1e-14);
    }
  }
}

TEST(ArrivalTimes, BinTimesAndDistribution) {
  EXPECT_EQ(arrival_time_ns(0, 3), 0.0);
  EXPECT_EQ(arrival_time_ns(1, 3), 2.0);   // "100"
  EXPECT_EQ(arrival_time_ns(2, 3), 4.0);   // "010"
  EXPECT_EQ(arrival_time_ns(7, 3), 14.0);  // "111"
  const PerturbedCoin coin(0.4, 0.7);
  const auto at = arrival_time_distribution(run_circuit(coin, CausalStateId::S1, 3));
  std::vector<double> times = at.times_ns;
  std::sort(times.begin(), times.end());
  EXPECT_EQ(times, (std::vector<double>{0, 2, 4, 6, 8, 10, 12, 14}));
  const auto ref = oracle::futures(0.4, 0.7, 1, 3);
  for (const auto& [bits, p] : ref) EXPECT_NEAR(at.distribution.at(bits), p, 1e-14);
  EXPECT_NEAR(at.distribution.at("111"), 0.343, 1e-14);
}

TEST(ConditionalPolarization, DependsOnlyOnLastOutcome) {
  const PerturbedCoin coin(0.4, 0.7);
  const auto out = run_circuit(coin, CausalStateId::S0, 3);
  const auto rho = conditional_polarization(out, "010");
  const auto expect = DensityMatrix2::projector(causal_state(coin, CausalStateId::S0));
  EXPECT_LE(max_abs_difference(rho, expect), 1e-12);
  EXPECT_NEAR(rho(0, 0).real(), 0.4, 1e-12);
  EXPECT_NEAR(rho(0, 1).real(), std::sqrt(0.24), 1e-12);
  const auto s1 = DensityMatrix2::projector(causal_state(coin, CausalStateId::S1));
  for (const char* bits : {"001", "011", "101", "111"})
    EXPECT_LE(max_abs_difference(conditional_polarization(out, bits), s1), 1e-12);
}

TEST(ConditionalPolarization, EmptyBinRaises) {
  const auto out = run_circuit(PerturbedCoin(1.0, 1.0), CausalStateId::S0, 2);
  EXPECT_THROW(conditional_polarization(out, "01"), EmptyBin);
  EXPECT_NO_THROW(conditional_polarization(out, "00"));
  EXPECT_THROW(conditional_polarization(out, "0"), DimensionMismatch);
}

TEST(Reconstruction, MatchesMemoryDensity) {
  for (double l : grid(10))
    for (double m : grid(10)) {
      const PerturbedCoin coin(l, m);
      const auto w = (l == 1.0 && m == 1.0)
                         ? StationaryWeights::explicit_weights(0.5)
                         : stationary_weights(coin, WeightMethod::ExactStationary);
      for (int steps = 1; steps <= 3; ++steps) {
        EXPECT_LE(max_abs_difference(reconstruct_memory_density(coin, w, steps),
                                     memory_density(coin, w)),
                  1e-12)
            << l << " " << m << " " << steps;
      }
    }
}

TEST(Reconstruction, ExplicitCases) {
  const auto half = StationaryWeights::explicit_weights(0.5);
  const auto frozen = reconstruct_memory_density(PerturbedCoin(1.0, 1.0), half, 2);
  EXPECT_NEAR(frozen(0, 0).real(), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(frozen(0, 1)), 0.0, 1e-12);
  const auto fair = reconstruct_memory_density(PerturbedCoin(0.5, 0.5), half, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(fair(i, j).real(), 0.5, 1e-12);
}

TEST(GateDecomposition, ReproducesBlockMap) {
  for (double l : grid(20))
    for (double m : grid(20)) EXPECT_LE(gate_decomposition_deviation(PerturbedCoin(l, m)), 1e-12);
}
