#pragma once

#include <cstddef>
#include <optional>

#include "mrt/circuit_model.hpp"
#include "mrt/spectral_solver.hpp"

namespace mrt {

struct ObservabilityReport {
  std::size_t n_r_exact = 0;
  double n_r_harmonic = 0.0;
  double t1 = 0.0;             // s; +inf for no dissipation
  double omega_l = 0.0;        // rad/s
  double bound = 0.0;          // omega_L T_1
  double ratio = 0.0;          // n_r_exact / bound
  double gamma_r_ghz = 0.0;    // N_R hbar / T_1 as a frequency, exact count
  double gamma_r_harmonic_ghz = 0.0;
  double delta_r_ghz = 0.0;    // right-well level spacing
  double splitting_ghz = 0.0;  // tunnel splitting the width is compared with
  bool observable = false;       // n_r_exact <= bound
  bool coherent_regime = false;  // gamma_r <= splitting
};

/// The inequality itself, for callers that already hold the numbers.
ObservabilityReport assess_observability(std::size_t n_r_exact,
                                         double n_r_harmonic, double omega_l,
                                         double t1, double delta_r_ghz,
                                         double splitting_ghz);

/// Uses the exact right-well count of `solution`, the cubic-well omega_L at
/// bias_j, and the semiclassical right-well spacing and n_L = 0 splitting at
/// the left ground level. Throws ConfigError when params has no t1.
ObservabilityReport observability_report(const CircuitParams& params,
                                         const SpectralSolution& solution,
                                         const DerivedScales& scales,
                                         double bias_j);

}  // namespace mrt
