#pragma once

#include <array>

namespace qcoin {

// Every numerical tolerance used by the library and the CLI validators.
struct Tolerances {
  double probability_range = 1e-12;     // l, m may exceed [0,1] by this much
  double row_stochastic = 1e-12;
  double distribution_sum = 1e-9;
  double unit_norm = 1e-9;
  double weights_sum = 1e-12;
  double hermitian = 1e-12;
  double trace = 1e-12;
  double negative_eigenvalue = 1e-9;    // below -this an eigenvalue is non-physical
  double imaginary_residue = 1e-12;
  double amplitude_match = 1e-12;
  double density_match = 1e-12;
  double identity_match = 1e-12;        // overlap identities, Chapman-Kolmogorov
  double empty_bin = 1e-15;
  double fit_exact = 1e-6;
};

inline constexpr Tolerances kTol{};

// Physical delay added by the long path of block k (k = 0, 1, 2, ...), in ns.
// The first three are the built hardware; later blocks keep doubling.
inline constexpr double kFirstDelayNs = 2.0;

inline constexpr int kMaxEnumerationSteps = 20;
inline constexpr int kMaxCircuitSteps = 12;

}  // namespace qcoin
