#include "mrt/observability.hpp"

#include <cmath>

#include "mrt/constants.hpp"
#include "mrt/errors.hpp"
#include "mrt/wkb.hpp"

namespace mrt {

ObservabilityReport assess_observability(std::size_t n_r_exact,
                                         double n_r_harmonic, double omega_l,
                                         double t1, double delta_r_ghz,
                                         double splitting_ghz) {
  if (!(t1 > 0.0)) throw ConfigError("t1 must be positive");
  if (!(omega_l >= 0.0)) throw ConfigError("omega_L must be non-negative");
  ObservabilityReport r;
  r.n_r_exact = n_r_exact;
  r.n_r_harmonic = n_r_harmonic;
  r.t1 = t1;
  r.omega_l = omega_l;
  r.bound = omega_l * t1;
  r.ratio = static_cast<double>(n_r_exact) / r.bound;
  // Gamma / h = N_R / (2 pi T_1).
  const double per_state = 1e-9 / (2.0 * constants::pi * t1);
  r.gamma_r_ghz = static_cast<double>(n_r_exact) * per_state;
  r.gamma_r_harmonic_ghz = n_r_harmonic * per_state;
  r.delta_r_ghz = delta_r_ghz;
  r.splitting_ghz = splitting_ghz;
  r.observable = static_cast<double>(n_r_exact) <= r.bound;
  r.coherent_regime = r.gamma_r_ghz <= splitting_ghz;
  return r;
}

ObservabilityReport observability_report(const CircuitParams& params,
                                         const SpectralSolution& solution,
                                         const DerivedScales& scales,
                                         double bias_j) {
  if (!params.t1) throw ConfigError("observability needs circuit t1_seconds");
  const PotentialProfile profile(bias_j, scales.beta);
  const WellSet wells = find_wells(profile);
  const wkb::WkbEstimate w = wkb::wkb_estimate(scales, bias_j, 0);
  return assess_observability(
      solution.n_right_below_zero,
      right_state_count_harmonic(scales, profile, wells),
      plasma_frequency_left(scales, bias_j), *params.t1, w.delta_r_ghz,
      w.delta_overlap_mhz * 1e-3);
}

}  // namespace mrt
