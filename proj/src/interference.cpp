#include "qcoin/interference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qcoin/errors.hpp"
#include "qcoin/kernels.hpp"
#include "qcoin/tolerances.hpp"

namespace qcoin {

namespace {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

Vector4 to_vector(const DipParameters& p) {
  return {p.baseline, p.visibility, p.sigma_ns, p.center_ns};
}

DipParameters from_vector(const Vector4& v) { return {v[0], v[1], v[2], v[3]}; }

// d model / d (baseline, visibility, sigma, center)
Vector4 dip_gradient(const DipParameters& p, double tau) {
  const double dt = tau - p.center_ns;
  const double s2 = p.sigma_ns * p.sigma_ns;
  const double g = std::exp(-dt * dt / (2.0 * s2));
  const double depth = p.baseline * p.visibility * g;
  return {1.0 - p.visibility * g, -p.baseline * g, -depth * dt * dt / (s2 * p.sigma_ns),
          -depth * dt / s2};
}

struct Objective {
  double chi2;
  Matrix4 jtj;
  Vector4 jtr;
};

Objective evaluate(std::span<const DipSample> samples, std::span<const double> weights,
                   const DipParameters& p) {
  Objective o{0.0, Matrix4::Zero(), Vector4::Zero()};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = samples[i].counts - dip_model(p, samples[i].delay_ns);
    const Vector4 j = dip_gradient(p, samples[i].delay_ns);
    o.chi2 += weights[i] * r * r;
    o.jtj.noalias() += weights[i] * j * j.transpose();
    o.jtr.noalias() += weights[i] * r * j;
  }
  return o;
}

DipParameters initial_guess(std::span<const DipSample> samples) {
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                      [](const auto& a, const auto& b) { return a.counts < b.counts; });
  const double baseline = std::max(hi->counts, 1e-300);
  const double depth = baseline - lo->counts;
  const double vis = std::clamp(depth / baseline, 1e-3, 1.0);

  double min_delay = samples.front().delay_ns;
  double max_delay = min_delay;
  for (const auto& s : samples) {
    min_delay = std::min(min_delay, s.delay_ns);
    max_delay = std::max(max_delay, s.delay_ns);
  }
  // Full width at half depth around the minimum.
  double left = lo->delay_ns;
  double right = lo->delay_ns;
  for (const auto& s : samples) {
    if (s.counts < baseline - 0.5 * depth) {
      left = std::min(left, s.delay_ns);
      right = std::max(right, s.delay_ns);
    }
  }
  double sigma = (right - left) / 2.3548;
  if (!(sigma > 0.0)) sigma = (max_delay - min_delay) / 8.0;
  return {baseline, vis, sigma, lo->delay_ns};
}

}  // namespace

cplx state_overlap(std::span<const cplx> phi, std::span<const cplx> psi) {
  if (phi.size() != psi.size()) {
    throw DimensionMismatch("states have different dimensions (" + std::to_string(phi.size()) +
                            " vs " + std::to_string(psi.size()) + ")");
  }
  return kernels::inner_product(phi, psi);
}

double visibility(std::span<const cplx> psi, std::span<const cplx> phi) {
  return std::min(1.0, std::norm(state_overlap(phi, psi)));
}

double coincidence_probability(std::span<const cplx> psi, std::span<const cplx> phi) {
  return 0.5 * (1.0 - visibility(psi, phi));
}

double dip_model(const DipParameters& p, double delay_ns) {
  const double dt = delay_ns - p.center_ns;
  return p.baseline * (1.0 - p.visibility * std::exp(-dt * dt / (2.0 * p.sigma_ns * p.sigma_ns)));
}

DipCurve dip_curve(double visibility, double envelope_sigma_ns, std::span<const double> delays_ns,
                   double baseline) {
  if (!(envelope_sigma_ns > 0.0)) throw InvalidParameter("envelope sigma must be positive");
  if (!(baseline > 0.0)) throw InvalidParameter("baseline must be positive");
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw InvalidParameter("visibility must lie in [0, 1]");
  }
  DipCurve curve{{delays_ns.begin(), delays_ns.end()}, {}, envelope_sigma_ns, baseline, visibility};
  const DipParameters p{baseline, visibility, envelope_sigma_ns, 0.0};
  curve.counts.reserve(delays_ns.size());
  for (double tau : delays_ns) curve.counts.push_back(std::max(0.0, dip_model(p, tau)));
  return curve;
}

std::vector<double> poisson_counts(std::span<const double> expected, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> sampled;
  sampled.reserve(expected.size());
  for (double mean : expected) {
    if (mean <= 0.0) {
      sampled.push_back(0.0);
      continue;
    }
    std::poisson_distribution<long long> draw(mean);
    sampled.push_back(static_cast<double>(draw(rng)));
  }
  return sampled;
}

VisibilityFit fit_visibility(std::span<const DipSample> samples, const FitOptions& options) {
  if (samples.size() < 5) throw InvalidParameter("visibility fit needs at least 5 samples");
  for (const auto& s : samples) {
    if (!std::isfinite(s.delay_ns) || !std::isfinite(s.counts) || s.counts < 0.0) {
      throw InvalidParameter("dip samples must be finite with nonnegative counts");
    }
  }

  std::vector<double> weights(samples.size(), 1.0);
  if (options.poisson_weights) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      weights[i] = 1.0 / std::max(samples[i].counts, 1.0);
    }
  }

  DipParameters p = initial_guess(samples);
  Objective current = evaluate(samples, weights, p);
  double lambda = 1e-3;
  int iteration = 0;
  bool converged = false;

  for (; iteration < options.max_iterations; ++iteration) {
    // Marquardt scaling with a floor so flat directions (v = 0) stay solvable.
    Vector4 scale = current.jtj.diagonal();
    const double floor = 1e-12 * std::max(scale.maxCoeff(), 1e-300);
    scale = scale.cwiseMax(floor);

    const Matrix4 a = current.jtj + lambda * Matrix4(scale.asDiagonal());
    const Vector4 step = a.ldlt().solve(current.jtr);
    const Vector4 x = to_vector(p);
    const DipParameters trial = from_vector(x + step);

    if (!step.allFinite()) break;
    const bool valid = trial.sigma_ns > 0.0 && trial.baseline > 0.0;
    const Objective next = valid ? evaluate(samples, weights, trial)
                                 : Objective{std::numeric_limits<double>::infinity(), {}, {}};

    if (next.chi2 <= current.chi2) {
      const double decrease = current.chi2 - next.chi2;
      p = trial;
      current = next;
      lambda = std::max(lambda / 10.0, 1e-12);
      const bool small_step =
          (step.array().abs() <= 1e-12 * (x.array().abs() + 1e-12)).all();
      if (small_step || decrease <= 1e-15 * current.chi2 || current.chi2 == 0.0) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e16) {
        // No downhill step remains: at a minimum to machine precision.
        converged = true;
        break;
      }
    }
  }
  if (!converged || !std::isfinite(current.chi2)) {
    throw FitDidNotConverge("visibility fit did not converge after " + std::to_string(iteration) +
                            " iterations");
  }

  const Matrix4 covariance = current.jtj.completeOrthogonalDecomposition().pseudoInverse();
  double variance = covariance(1, 1);
  if (!options.poisson_weights) {
    const double dof = static_cast<double>(samples.size()) - 4.0;
    variance *= dof > 0.0 ? current.chi2 / dof : 0.0;
  }
  return {p, std::sqrt(std::max(variance, 0.0)), current.chi2, iteration + 1};
}

std::vector<VisibilityRecord> visibility_sweep(const ProcessWithStart& fixed,
                                               std::span<const ProcessWithStart> varying,
                                               int steps) {
  if (varying.empty()) throw InvalidParameter("visibility sweep needs at least one process");
  const auto reference = run_circuit(fixed.process.coin, fixed.start, steps);
  std::vector<VisibilityRecord> records(varying.size(), VisibilityRecord{0, 0, 0, fixed, fixed});
  const auto n = static_cast<std::ptrdiff_t>(varying.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& other = varying[static_cast<std::size_t>(i)];
    const auto state = run_circuit(other.process.coin, other.start, steps);
    const double overlap = std::abs(real_overlap(state_overlap(reference.amplitudes(),
                                                               state.amplitudes())));
    const double v = std::min(1.0, overlap * overlap);
    records[static_cast<std::size_t>(i)] = {overlap, v, 0.5 * (1.0 - v), fixed, other};
  }
  return records;
}

}  // namespace qcoin
