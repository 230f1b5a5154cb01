#pragma once

// Test-only reference computations. None of these call into the library's
// enumeration, circuit or overlap code; they work from l and m directly.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace qcoin::oracle {

// Probability of emitting `symbol` from the state named by the last symbol.
inline double step(double l, double m, int from, int symbol) {
  if (from == 0) return symbol == 0 ? l : 1.0 - l;
  return symbol == 1 ? m : 1.0 - m;
}

// All futures of length `steps` by recursive depth-first expansion, keyed by
// the printed bitstring x1 x2 ... xM.
inline std::map<std::string, double> futures(double l, double m, int start, int steps) {
  std::map<std::string, double> out;
  std::function<void(int, std::string, double)> grow = [&](int state, std::string prefix,
                                                          double p) {
    if (static_cast<int>(prefix.size()) == steps) {
      out[prefix] = p;
      return;
    }
    for (int s = 0; s < 2; ++s) grow(s, prefix + char('0' + s), p * step(l, m, state, s));
  };
  grow(start, "", 1.0);
  return out;
}

// Stationary d0 by power iteration of the 2x2 transition matrix.
inline double stationary_d0_power(double l, double m, int iterations = 20000) {
  double d0 = 0.5;
  for (int i = 0; i < iterations; ++i) {
    const double next = d0 * l + (1.0 - d0) * (1.0 - m);
    d0 = next;
  }
  return d0;
}

inline std::array<double, 2> causal(double l, double m, int id) {
  return id == 0 ? std::array<double, 2>{std::sqrt(l), std::sqrt(1.0 - l)}
                 : std::array<double, 2>{std::sqrt(1.0 - m), std::sqrt(m)};
}

// d0 |S0><S0| + d1 |S1><S1| as a real 2x2 matrix.
inline Eigen::Matrix2d outer_product_mixture(double l, double m, double d0) {
  const auto s0 = causal(l, m, 0);
  const auto s1 = causal(l, m, 1);
  Eigen::Vector2d a(s0[0], s0[1]);
  Eigen::Vector2d b(s1[0], s1[1]);
  return d0 * a * a.transpose() + (1.0 - d0) * b * b.transpose();
}

inline double entropy_bits(const std::vector<double>& lambdas) {
  double h = 0.0;
  for (double x : lambdas) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

// Entropy from Eigen's self-adjoint eigensolver.
inline double entropy_eigen(const Eigen::Matrix2cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho);
  const auto ev = solver.eigenvalues();
  return entropy_bits({std::max(ev[0], 0.0), std::max(ev[1], 0.0)});
}

// Analytic 2x2 Hermitian eigenvalues (tr +- sqrt((a - d)^2 + 4|b|^2)) / 2.
inline double entropy_analytic(double a, double d, std::complex<double> b) {
  const double tr = a + d;
  const double gap = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(b));
  return entropy_bits({std::max(0.5 * (tr + gap), 0.0), std::max(0.5 * (tr - gap), 0.0)});
}

// Output-state overlap straight from its defining sum, with memory overlap
// computed from explicit state vectors.
inline double overlap_sum(double la, double ma, int sa, double lb, double mb, int sb, int steps) {
  const auto pa = futures(la, ma, sa, steps);
  const auto pb = futures(lb, mb, sb, steps);
  double sum = 0.0;
  for (const auto& [bits, p] : pa) {
    const int last = bits.back() - '0';
    const auto u = causal(la, ma, last);
    const auto v = causal(lb, mb, last);
    sum += std::sqrt(p * pb.at(bits)) * (u[0] * v[0] + u[1] * v[1]);
  }
  return sum;
}

inline double bhattacharyya(const std::map<std::string, double>& p,
                            const std::map<std::string, double>& q) {
  double s = 0.0;
  for (const auto& [k, v] : p) s += std::sqrt(v * q.at(k));
  return s;
}

}  // namespace qcoin::oracle
