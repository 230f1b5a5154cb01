#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcoin/errors.hpp"
#include "qcoin/quantum_model.hpp"

using namespace qcoin;

namespace {

std::vector<double> grid(double step = 0.05) {
  std::vector<double> v;
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= n; ++i) v.push_back(i / static_cast<double>(n));
  return v;
}

ProcessSpec proc(double l, double m) { return {PerturbedCoin(l, m), ""}; }

}  // namespace

TEST(CausalState, Components) {
  const auto s0 = causal_state(PerturbedCoin(0.4, 0.7), CausalStateId::S0);
  EXPECT_NEAR(s0[0].real(), 0.632456, 1e-6);
  EXPECT_NEAR(s0[1].real(), 0.774597, 1e-6);
  const auto s1 = causal_state(PerturbedCoin(0.4, 0.7), CausalStateId::S1);
  EXPECT_NEAR(s1[0].real(), std::sqrt(0.3), 1e-15);
  EXPECT_NEAR(s1[1].real(), std::sqrt(0.7), 1e-15);
  EXPECT_EQ(s0[0].imag(), 0.0);
  EXPECT_NEAR(std::norm(s1[0]) + std::norm(s1[1]), 1.0, 1e-15);
}

TEST(CausalState, OverlapExamples) {
  const PerturbedCoin fair(0.5, 0.5), frozen(1.0, 1.0), coin(0.4, 0.7);
  EXPECT_NEAR(causal_overlap(fair, CausalStateId::S0, fair, CausalStateId::S1), 1.0, 1e-15);
  EXPECT_EQ(causal_overlap(frozen, CausalStateId::S0, frozen, CausalStateId::S1), 0.0);
  EXPECT_NEAR(causal_overlap(coin, CausalStateId::S1, coin, CausalStateId::S1), 1.0, 1e-15);
  const auto a = oracle::causal(0.4, 0.7, 0);
  const auto b = oracle::causal(0.4, 0.7, 1);
  EXPECT_NEAR(causal_overlap(coin, CausalStateId::S0, coin, CausalStateId::S1),
              a[0] * b[0] + a[1] * b[1], 1e-15);
}

TEST(DensityMatrix, RejectsNonPhysical) {
  const auto entries = [](cplx a, cplx b, cplx c, cplx d) {
    DensityMatrix2::Entries e;
    e[0] = {a, b};
    e[1] = {c, d};
    return e;
  };
  EXPECT_THROW(DensityMatrix2(entries(1.2, 0.0, 0.0, -0.2)), NonPhysicalState);
  EXPECT_THROW(DensityMatrix2(entries(0.5, 0.1, 0.2, 0.5)), NonPhysicalState);
  EXPECT_THROW(DensityMatrix2(entries(0.6, 0.0, 0.0, 0.6)), NonPhysicalState);
  EXPECT_NO_THROW(DensityMatrix2(entries(0.5, cplx{0.0, 0.5}, cplx{0.0, -0.5}, 0.5)));
}

TEST(MemoryDensity, MatchesOuterProductMixture) {
  for (double l : grid())
    for (double m : grid()) {
      if (l == 1.0 && m == 1.0) continue;
      const PerturbedCoin coin(l, m);
      const auto w = stationary_weights(coin, WeightMethod::ExactStationary);
      const auto rho = memory_density(coin, w);
      const Eigen::Matrix2d ref = oracle::outer_product_mixture(l, m, w.d0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(rho(i, j).real(), ref(i, j), 1e-12);
      EXPECT_NEAR((rho(0, 0) + rho(1, 1)).real(), 1.0, 1e-12);
      EXPECT_NEAR(std::abs(rho(0, 1) - std::conj(rho(1, 0))), 0.0, 1e-12);
    }
}

TEST(VonNeumannEntropy, MatchesEigenAndAnalyticOracles) {
  for (double l : grid())
    for (double m : grid()) {
      if (l == 1.0 && m == 1.0) continue;
      const PerturbedCoin coin(l, m);
      const auto rho = memory_density(coin, stationary_weights(coin, WeightMethod::ExactStationary));
      Eigen::Matrix2cd mat;
      mat << rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1);
      const double cq = von_neumann_entropy(rho);
      EXPECT_NEAR(cq, oracle::entropy_eigen(mat), 1e-9) << l << " " << m;
      EXPECT_NEAR(cq, oracle::entropy_analytic(rho(0, 0).real(), rho(1, 1).real(), rho(0, 1)),
                  1e-9);
    }
}

TEST(VonNeumannEntropy, BoundedByClassicalComplexity) {
  for (double l : grid())
    for (double m : grid()) {
      if (l == 1.0 && m == 1.0) continue;
      const PerturbedCoin coin(l, m);
      const auto w = stationary_weights(coin, WeightMethod::ExactStationary);
      const double cq = von_neumann_entropy(memory_density(coin, w));
      EXPECT_GE(cq, -1e-15);
      EXPECT_LE(cq, classical_complexity(w) + 1e-12) << l << " " << m;
    }
  // Orthogonal causal states saturate the bound.
  const PerturbedCoin frozen(1.0, 1.0);
  const auto half = StationaryWeights::explicit_weights(0.5);
  EXPECT_NEAR(von_neumann_entropy(memory_density(frozen, half)), 1.0, 1e-12);
  // Identical causal states give a pure memory.
  const PerturbedCoin fair(0.5, 0.5);
  EXPECT_NEAR(von_neumann_entropy(memory_density(fair, half)), 0.0, 1e-12);
}

TEST(IdealOutputState, FairCoinAmplitudes) {
  const auto psi = ideal_output_state(PerturbedCoin(0.5, 0.5), CausalStateId::S0, 2);
  for (std::uint32_t x = 0; x < 4; ++x) {
    EXPECT_NEAR(psi.amplitude(x, 0).real(), std::sqrt(0.25) * std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(psi.amplitude(x, 1).real(), std::sqrt(0.25) * std::sqrt(0.5), 1e-15);
  }
}

TEST(IdealOutputState, OutcomeMarginalIsFutureDistribution) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double l = u(rng), m = u(rng);
    for (int start = 0; start < 2; ++start) {
      const auto psi = ideal_output_state(PerturbedCoin(l, m), causal_state_after(start), 4);
      for (const auto& [bits, p] : oracle::futures(l, m, start, 4)) {
        const double marg = std::norm(psi.amplitude(bits, 0)) + std::norm(psi.amplitude(bits, 1));
        EXPECT_NEAR(marg, p, 1e-14);
      }
    }
  }
}

TEST(IdealOutputState, StepLimit) {
  EXPECT_THROW(ideal_output_state(PerturbedCoin(0.5, 0.5), CausalStateId::S0, 13),
               StepCountTooLarge);
  EXPECT_THROW(ideal_output_state(PerturbedCoin(0.5, 0.5), CausalStateId::S0, 0),
               InvalidParameter);
}

TEST(OutputOverlap, MatchesDefiningSum) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double la = u(rng), ma = u(rng), lb = u(rng), mb = u(rng);
    const int sa = trial % 2, sb = (trial / 2) % 2;
    for (int steps = 1; steps <= 4; ++steps) {
      EXPECT_NEAR(output_overlap(proc(la, ma), causal_state_after(sa), proc(lb, mb),
                                 causal_state_after(sb), steps),
                  oracle::overlap_sum(la, ma, sa, lb, mb, sb, steps), 1e-13);
    }
  }
}

TEST(OutputOverlap, SymmetricAndBounded) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = proc(u(rng), u(rng));
    const auto b = proc(u(rng), u(rng));
    const double ab = output_overlap(a, CausalStateId::S0, b, CausalStateId::S1, 3);
    const double ba = output_overlap(b, CausalStateId::S1, a, CausalStateId::S0, 3);
    EXPECT_NEAR(ab, ba, 1e-15);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
  }
  const auto c = proc(0.3, 0.8);
  EXPECT_NEAR(output_overlap(c, CausalStateId::S1, c, CausalStateId::S1, 5), 1.0, 1e-13);
}

TEST(OutputOverlap, EqualsBhattacharyyaOneStepLonger) {
  std::mt19937_64 rng(20190601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 1);
  std::uniform_int_distribution<int> len(1, 5);
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const double la = u(rng), ma = u(rng), lb = u(rng), mb = u(rng);
    const int sa = pick(rng), sb = pick(rng), steps = len(rng);
    const double lhs = output_overlap(proc(la, ma), causal_state_after(sa), proc(lb, mb),
                                      causal_state_after(sb), steps);
    const double rhs =
        oracle::bhattacharyya(oracle::futures(la, ma, sa, steps + 1),
                              oracle::futures(lb, mb, sb, steps + 1));
    worst = std::max(worst, std::abs(lhs - rhs));
    EXPECT_NEAR(
        bhattacharyya_futures(proc(la, ma), causal_state_after(sa), proc(lb, mb),
                              causal_state_after(sb), steps + 1),
        rhs, 1e-13);
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(RealOverlap, RejectsImaginaryResidue) {
  EXPECT_EQ(real_overlap(cplx{0.5, 1e-14}), 0.5);
  EXPECT_THROW(real_overlap(cplx{0.5, 1e-9}), InternalError);
}
