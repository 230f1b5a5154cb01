#include "qcoin/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "qcoin/errors.hpp"
#include "qcoin/kernels.hpp"
#include "qcoin/tolerances.hpp"

namespace qcoin {

namespace {

constexpr double kArmAmplitude = 1.0 / std::numbers::sqrt2;

kernels::Polarization as_polarization(const CausalStateVector& s) {
  return {s.amplitudes[0], s.amplitudes[1]};
}

void check_real(std::span<const cplx> amplitudes) {
  for (const auto& a : amplitudes) {
    if (std::abs(a.imag()) > kTol.imaginary_residue) {
      throw InternalError("circuit amplitude acquired an imaginary part");
    }
  }
}

using Matrix4 = std::array<std::array<double, 4>, 4>;

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
  Matrix4 c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

std::array<std::array<double, 2>, 2> rotation(double angle) {
  return {{{std::cos(angle), -std::sin(angle)}, {std::sin(angle), std::cos(angle)}}};
}

// Basis index 2 * memory + ancilla.
Matrix4 memory_gate(const std::array<std::array<double, 2>, 2>& g) {
  Matrix4 m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a) m[2 * i + a][2 * j + a] = g[i][j];
  return m;
}

Matrix4 controlled_on_ancilla(const std::array<std::array<double, 2>, 2>& g) {
  Matrix4 m{};
  for (int i = 0; i < 2; ++i) {
    m[2 * i][2 * i] = 1.0;
    for (int j = 0; j < 2; ++j) m[2 * i + 1][2 * j + 1] = g[i][j];
  }
  return m;
}

Matrix4 cnot_memory_to_ancilla() {
  Matrix4 m{};
  m[0][0] = 1.0;
  m[1][1] = 1.0;
  m[3][2] = 1.0;
  m[2][3] = 1.0;
  return m;
}

}  // namespace

PhotonState::PhotonState(int steps_applied, std::vector<cplx> amplitudes,
                         double success_probability)
    : steps_applied_(steps_applied),
      amplitudes_(std::move(amplitudes)),
      success_probability_(success_probability) {
  if (steps_applied_ < 0 || steps_applied_ > kMaxCircuitSteps) {
    throw StepCountTooLarge("photon state step count out of range");
  }
  if (amplitudes_.size() != (std::size_t{2} << steps_applied_)) {
    throw DimensionMismatch("photon state needs 2 * 2^steps amplitudes");
  }
  if (!(success_probability_ > 0.0 && success_probability_ <= 1.0)) {
    throw InvalidParameter("success probability must lie in (0, 1]");
  }
  const double norm = kernels::squared_norm(amplitudes_);
  if (std::abs(norm - 1.0) > kTol.unit_norm) {
    throw InternalError("photon state norm " + std::to_string(norm) + " is not 1");
  }
}

PhotonState prepare_input(const PerturbedCoin& coin, CausalStateId start) {
  const auto s = causal_state(coin, start);
  return {0, {s.amplitudes[0], s.amplitudes[1]}, 1.0};
}

BeamSplitterArms apply_block_both_arms(const PhotonState& state, const BlockSpec& block) {
  if (state.steps_applied() >= kMaxCircuitSteps) {
    throw StepCountTooLarge("circuit supports at most " + std::to_string(kMaxCircuitSteps) +
                            " blocks");
  }
  const auto short_pol = as_polarization(causal_state(block.coin, CausalStateId::S0));
  const auto long_pol = as_polarization(causal_state(block.coin, CausalStateId::S1));
  const std::size_t bins = state.bins();
  BeamSplitterArms arms{std::vector<cplx>(4 * bins), std::vector<cplx>(4 * bins)};
  kernels::apply_block(state.amplitudes(), bins, short_pol, long_pol, kArmAmplitude,
                       arms.retained);

  // The other port sees (short - long) / sqrt(2).
  kernels::apply_block(state.amplitudes(), bins, short_pol, long_pol, kArmAmplitude,
                       arms.discarded);
  for (std::size_t i = 2 * bins; i < 4 * bins; ++i) arms.discarded[i] = -arms.discarded[i];
  return arms;
}

PhotonState apply_block(const PhotonState& state, const BlockSpec& block) {
  if (state.steps_applied() >= kMaxCircuitSteps) {
    throw StepCountTooLarge("circuit supports at most " + std::to_string(kMaxCircuitSteps) +
                            " blocks");
  }
  const auto short_pol = as_polarization(causal_state(block.coin, CausalStateId::S0));
  const auto long_pol = as_polarization(causal_state(block.coin, CausalStateId::S1));
  const std::size_t bins = state.bins();
  std::vector<cplx> out(4 * bins);
  kernels::apply_block(state.amplitudes(), bins, short_pol, long_pol, kArmAmplitude, out);
  check_real(out);

  const double retained = kernels::squared_norm(out);
  const double inv = 1.0 / std::sqrt(retained);
  for (auto& a : out) a *= inv;
  return {state.steps_applied() + 1, std::move(out), state.success_probability() * retained};
}

PhotonState run_circuit(const PerturbedCoin& coin, CausalStateId start, int steps) {
  if (steps < 1) throw InvalidParameter("step count must be at least 1");
  if (steps > kMaxCircuitSteps) {
    throw StepCountTooLarge("circuit supports at most " + std::to_string(kMaxCircuitSteps) +
                            " blocks");
  }
  PhotonState state = prepare_input(coin, start);
  const BlockSpec block{coin};
  for (int k = 0; k < steps; ++k) state = apply_block(state, block);
  return state;
}

double arrival_time_ns(std::uint32_t bin, int steps) {
  double t = 0.0;
  double delay = kFirstDelayNs;
  for (int k = 0; k < steps; ++k, delay *= 2.0) {
    if ((bin >> k) & 1u) t += delay;
  }
  return t;
}

ArrivalTimes arrival_time_distribution(const PhotonState& state) {
  const int steps = state.steps_applied();
  if (steps < 1) throw InvalidParameter("no blocks applied; arrival time is not defined");
  const std::size_t bins = state.bins();
  std::vector<double> p(bins);
  std::vector<double> times(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    p[b] = std::norm(state.amplitude(b, Polarization::H)) +
           std::norm(state.amplitude(b, Polarization::V));
    times[b] = arrival_time_ns(static_cast<std::uint32_t>(b), steps);
  }
  return {OutcomeDistribution(steps, std::move(p)), std::move(times)};
}

DensityMatrix2 conditional_polarization(const PhotonState& state, std::uint32_t bin) {
  if (bin >= state.bins()) throw DimensionMismatch("bin index out of range");
  const cplx h = state.amplitude(bin, Polarization::H);
  const cplx v = state.amplitude(bin, Polarization::V);
  const double p = std::norm(h) + std::norm(v);
  if (p <= kTol.empty_bin) {
    throw EmptyBin("time bin " + std::to_string(bin) + " has negligible probability");
  }
  const double inv = 1.0 / std::sqrt(p);
  return DensityMatrix2::projector({{h * inv, v * inv}});
}

DensityMatrix2 conditional_polarization(const PhotonState& state, std::string_view bits) {
  if (static_cast<int>(bits.size()) != state.steps_applied()) {
    throw DimensionMismatch("bitstring length does not match applied blocks");
  }
  return conditional_polarization(state, bitstring_index(bits));
}

DensityMatrix2 reconstruct_memory_density(const PerturbedCoin& coin,
                                          const StationaryWeights& weights, int steps) {
  DensityMatrix2::Entries sum{};
  const std::pair<CausalStateId, double> inputs[] = {{CausalStateId::S0, weights.d0},
                                                     {CausalStateId::S1, weights.d1}};
  for (const auto& [start, d] : inputs) {
    if (d == 0.0) continue;
    const auto out = run_circuit(coin, start, steps);
    const auto arrivals = arrival_time_distribution(out);
    for (std::uint32_t b = 0; b < out.bins(); ++b) {
      const double p = arrivals.distribution[b];
      if (p <= kTol.empty_bin) continue;
      const auto rho = conditional_polarization(out, b);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) sum[i][j] += d * p * rho(i, j);
    }
  }
  // Bins dropped as empty remove at most 2^steps * 1e-15 of trace.
  const double trace = sum[0][0].real() + sum[1][1].real();
  for (auto& row : sum)
    for (auto& x : row) x /= trace;
  return DensityMatrix2(sum);
}

double gate_decomposition_deviation(const PerturbedCoin& coin) {
  const double theta0 = std::atan2(std::sqrt(1.0 - coin.l()), std::sqrt(coin.l()));
  const double theta1 = std::atan2(std::sqrt(coin.m()), std::sqrt(1.0 - coin.m()));
  const auto r = rotation(theta0);
  // R|1> sits at angle theta0 + pi/2; V rotates it onto |S1>.
  const auto v = rotation(theta1 - theta0 - std::numbers::pi / 2.0);
  const Matrix4 u = multiply(controlled_on_ancilla(v),
                             multiply(memory_gate(r), cnot_memory_to_ancilla()));

  double worst = 0.0;
  const BlockSpec block{coin};
  for (int memory = 0; memory < 2; ++memory) {
    std::vector<cplx> input(2);
    input[static_cast<std::size_t>(memory)] = 1.0;
    const auto out = apply_block(PhotonState(0, input, 1.0), block);
    // Time bin 0/1 plays the role of ancilla |0>/|1>.
    for (int mem_out = 0; mem_out < 2; ++mem_out) {
      for (int anc = 0; anc < 2; ++anc) {
        const cplx block_amp = out.amplitude(static_cast<std::size_t>(anc),
                                             static_cast<Polarization>(mem_out));
        const double gate_amp = u[2 * mem_out + anc][2 * memory];
        worst = std::max(worst, std::abs(block_amp - gate_amp));
      }
    }
  }
  return worst;
}

}  // namespace qcoin
