#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "qcoin/circuit.hpp"
#include "qcoin/quantum_model.hpp"

namespace qcoin {

// PhotonState and IdealOutputState both expose a flat amplitude view.
template <class T>
concept AmplitudeState = requires(const T& s) {
  { s.amplitudes() } -> std::convertible_to<std::span<const cplx>>;
};

// <phi|psi>; throws DimensionMismatch on unequal sizes.
cplx state_overlap(std::span<const cplx> phi, std::span<const cplx> psi);

// HOM coincidence probability (1 - |<phi|psi>|^2) / 2.
double coincidence_probability(std::span<const cplx> psi, std::span<const cplx> phi);

// |<phi|psi>|^2
double visibility(std::span<const cplx> psi, std::span<const cplx> phi);

template <AmplitudeState A, AmplitudeState B>
double coincidence_probability(const A& psi, const B& phi) {
  return coincidence_probability(std::span<const cplx>(psi.amplitudes()),
                                 std::span<const cplx>(phi.amplitudes()));
}

template <AmplitudeState A, AmplitudeState B>
double visibility(const A& psi, const B& phi) {
  return visibility(std::span<const cplx>(psi.amplitudes()),
                    std::span<const cplx>(phi.amplitudes()));
}

// Coincidences vs relative delay: baseline * (1 - v * exp(-(tau - center)^2 / (2 sigma^2))).
struct DipParameters {
  double baseline;
  double visibility;
  double sigma_ns;
  double center_ns = 0.0;
};

double dip_model(const DipParameters& p, double delay_ns);

struct DipCurve {
  std::vector<double> delays_ns;
  std::vector<double> counts;
  double envelope_sigma_ns;
  double baseline;
  double visibility;
};

DipCurve dip_curve(double visibility, double envelope_sigma_ns, std::span<const double> delays_ns,
                   double baseline);

template <AmplitudeState A, AmplitudeState B>
DipCurve dip_curve(const A& psi, const B& phi, double envelope_sigma_ns,
                   std::span<const double> delays_ns, double baseline) {
  return dip_curve(visibility(psi, phi), envelope_sigma_ns, delays_ns, baseline);
}

// Independent Poisson draw per delay point; deterministic for a given seed.
std::vector<double> poisson_counts(std::span<const double> expected, std::uint64_t seed);

struct DipSample {
  double delay_ns;
  double counts;
};

struct VisibilityFit {
  DipParameters parameters;
  double visibility_sigma;  // 1-sigma from the fit covariance
  double chi2;
  int iterations;
};

struct FitOptions {
  // Weight residuals by 1 / max(counts, 1) (Poisson variance). When false the
  // fit is unweighted and the covariance is scaled by the residual variance.
  bool poisson_weights = true;
  int max_iterations = 500;
};

// Least-squares fit of dip_model with baseline, visibility, sigma and center free.
VisibilityFit fit_visibility(std::span<const DipSample> samples, const FitOptions& options = {});

struct ProcessWithStart {
  ProcessSpec process;
  CausalStateId start;
};

struct VisibilityRecord {
  double overlap;          // |<phi|psi>|
  double visibility;       // |<phi|psi>|^2
  double coincidence_min;  // (1 - v) / 2
  ProcessWithStart first;
  ProcessWithStart second;
};

// Interferes the circuit output of `fixed` with each entry of `varying`.
std::vector<VisibilityRecord> visibility_sweep(const ProcessWithStart& fixed,
                                               std::span<const ProcessWithStart> varying,
                                               int steps);

}  // namespace qcoin
