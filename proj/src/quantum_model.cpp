#include "qcoin/quantum_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcoin/errors.hpp"
#include "qcoin/kernels.hpp"
#include "qcoin/tolerances.hpp"

namespace qcoin {

namespace {

// Squared amplitudes of a causal state: its outgoing transition row.
std::array<double, 2> causal_weights(const PerturbedCoin& coin, CausalStateId id) {
  const auto t = transition_matrix(coin);
  return t[static_cast<std::size_t>(index_of(id))];
}

double entropy_term(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace

DensityMatrix2::DensityMatrix2(const Entries& entries) : entries_(entries) {
  const auto& e = entries_;
  if (std::abs(e[0][1] - std::conj(e[1][0])) > kTol.hermitian ||
      std::abs(e[0][0].imag()) > kTol.hermitian || std::abs(e[1][1].imag()) > kTol.hermitian) {
    throw NonPhysicalState("density matrix is not Hermitian");
  }
  if (std::abs(e[0][0].real() + e[1][1].real() - 1.0) > kTol.trace) {
    throw NonPhysicalState("density matrix trace is not 1");
  }
  eigenvalues();
}

DensityMatrix2 DensityMatrix2::projector(const CausalStateVector& state) {
  Entries e{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = state[i] * std::conj(state[j]);
    }
  }
  return DensityMatrix2(e);
}

std::array<double, 2> DensityMatrix2::eigenvalues() const {
  const auto& e = entries_;
  const double det = e[0][0].real() * e[1][1].real() - std::norm(e[0][1]);
  // Roots of lambda^2 - lambda + det; the small root via det / large root
  // avoids cancellation for nearly pure states.
  const double discriminant = std::max(0.0, 1.0 - 4.0 * det);
  const double large = 0.5 * (1.0 + std::sqrt(discriminant));
  const double small = det / large;
  if (small < -kTol.negative_eigenvalue) {
    throw NonPhysicalState("density matrix has eigenvalue " + std::to_string(small));
  }
  return {std::clamp(large, 0.0, 1.0), std::clamp(small, 0.0, 1.0)};
}

double max_abs_difference(const DensityMatrix2& a, const DensityMatrix2& b) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  }
  return worst;
}

IdealOutputState::IdealOutputState(int steps, std::vector<cplx> amplitudes)
    : steps_(steps), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != (std::size_t{2} << steps_)) {
    throw DimensionMismatch("output state needs 2^(steps+1) amplitudes");
  }
  const double norm = kernels::squared_norm(amplitudes_);
  if (std::abs(norm - 1.0) > kTol.unit_norm) {
    throw InternalError("output state norm " + std::to_string(norm) + " is not 1");
  }
}

cplx IdealOutputState::amplitude(std::string_view bits, int memory) const {
  if (static_cast<int>(bits.size()) != steps_) {
    throw DimensionMismatch("bitstring length does not match step count");
  }
  return amplitude(bitstring_index(bits), memory);
}

CausalStateVector causal_state(const PerturbedCoin& coin, CausalStateId id) {
  const auto w = causal_weights(coin, id);
  return {{cplx{std::sqrt(w[0]), 0.0}, cplx{std::sqrt(w[1]), 0.0}}};
}

double causal_overlap(const PerturbedCoin& coin_a, CausalStateId id_a, const PerturbedCoin& coin_b,
                      CausalStateId id_b) {
  const auto a = causal_weights(coin_a, id_a);
  const auto b = causal_weights(coin_b, id_b);
  return std::sqrt(a[0] * b[0]) + std::sqrt(a[1] * b[1]);
}

DensityMatrix2 memory_density(const PerturbedCoin& coin, const StationaryWeights& weights) {
  const auto s0 = causal_state(coin, CausalStateId::S0);
  const auto s1 = causal_state(coin, CausalStateId::S1);
  DensityMatrix2::Entries e{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          weights.d0 * s0[i] * std::conj(s0[j]) + weights.d1 * s1[i] * std::conj(s1[j]);
    }
  }
  return DensityMatrix2(e);
}

double von_neumann_entropy(const DensityMatrix2& rho) {
  const auto lambda = rho.eigenvalues();
  return entropy_term(lambda[0]) + entropy_term(lambda[1]);
}

IdealOutputState ideal_output_state(const PerturbedCoin& coin, CausalStateId start, int steps) {
  if (steps < 1) throw InvalidParameter("step count must be at least 1");
  if (steps > kMaxCircuitSteps) {
    throw StepCountTooLarge("ideal output state supports at most " +
                            std::to_string(kMaxCircuitSteps) + " steps");
  }
  const auto futures = future_distribution(coin, start, steps);
  const CausalStateVector memory[2] = {causal_state(coin, CausalStateId::S0),
                                       causal_state(coin, CausalStateId::S1)};
  std::vector<cplx> amplitudes(std::size_t{2} << steps);
  const std::uint32_t last_bit = 1u << (steps - 1);
  for (std::uint32_t x = 0; x < futures.size(); ++x) {
    const double root_p = std::sqrt(futures[x]);
    const auto& s = memory[(x & last_bit) ? 1 : 0];
    amplitudes[2 * x] = root_p * s[0];
    amplitudes[2 * x + 1] = root_p * s[1];
  }
  return {steps, std::move(amplitudes)};
}

double output_overlap(const ProcessSpec& a, CausalStateId start_a, const ProcessSpec& b,
                      CausalStateId start_b, int steps) {
  const auto pa = future_distribution(a.coin, start_a, steps);
  const auto pb = future_distribution(b.coin, start_b, steps);
  const double memory_overlap[2] = {
      causal_overlap(a.coin, CausalStateId::S0, b.coin, CausalStateId::S0),
      causal_overlap(a.coin, CausalStateId::S1, b.coin, CausalStateId::S1)};
  const std::uint32_t last_bit = 1u << (steps - 1);
  double sum = 0.0;
  for (std::uint32_t x = 0; x < pa.size(); ++x) {
    sum += std::sqrt(pa[x] * pb[x]) * memory_overlap[(x & last_bit) ? 1 : 0];
  }
  return sum;
}

double bhattacharyya_futures(const ProcessSpec& a, CausalStateId start_a, const ProcessSpec& b,
                             CausalStateId start_b, int steps) {
  return classical_fidelity(future_distribution(a.coin, start_a, steps),
                            future_distribution(b.coin, start_b, steps));
}

double real_overlap(cplx overlap) {
  if (std::abs(overlap.imag()) > kTol.imaginary_residue) {
    throw InternalError("overlap has imaginary residue " + std::to_string(overlap.imag()));
  }
  return overlap.real();
}

}  // namespace qcoin
