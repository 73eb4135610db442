#pragma once

#include <cstddef>
#include <optional>

namespace mrt {

/// Physical parameters of the rf SQUID, SI units.
struct CircuitParams {
  double capacitance = 0.0;       // F
  double inductance = 0.0;        // H
  double critical_current = 0.0;  // A
  std::optional<double> t1;       // s, energy relaxation time
};

/// Throws ConfigError unless every field is strictly positive.
void validate(const CircuitParams& params);

/// Energy scales derived from a circuit. Internal calculations work in units
/// of E_J; everything reported outward is E/h in GHz.
struct DerivedScales {
  double e_c = 0.0;       // J, e^2/2C
  double e_j = 0.0;       // J, I_c Phi_0 / 2pi
  double e_c_ghz = 0.0;   // E_C / h in GHz
  double e_j_ghz = 0.0;   // E_J / h in GHz
  double beta = 0.0;      // 2 pi I_c L / Phi_0
  double omega0 = 0.0;    // rad/s, sqrt(8 E_C E_J) / hbar
  double lambda = 0.0;    // 4 E_C / E_J, the kinetic prefactor in units of E_J
  double j_star = 0.0;    // critical bias
  double i_star = 0.0;    // A, I_c J*
  double critical_current = 0.0;  // A

  double to_ghz(double energy_ej) const { return energy_ej * e_j_ghz; }
  double to_ej(double energy_ghz) const { return energy_ghz / e_j_ghz; }
  /// Effective mass of the phase coordinate, hbar^2 / (8 E_C), in kg m^2.
  double effective_mass() const;
};

DerivedScales derive_scales(const CircuitParams& params);

/// Scales for a circuit specified by I_c, beta and the ratio E_C/E_J. The
/// capacitance and inductance follow from the ratio; used by the deep-well
/// sweep where E_C/E_J is the swept axis.
DerivedScales scales_from_ratio(double critical_current, double beta,
                                double ec_over_ej);

/// C (Phi_0 / 2pi)^2.
double effective_mass(const CircuitParams& params);

/// Closed-form critical bias sqrt(1 - 1/beta^2) + arccos(-1/beta) / beta,
/// principal arccos branch. Throws RegimeError for beta <= 1.
double critical_bias(double beta);

/// Dimensionless potential u = gamma^2 / 2 beta - cos gamma - J gamma.
class PotentialProfile {
 public:
  PotentialProfile(double bias_j, double beta);

  double bias() const { return bias_j_; }
  double beta() const { return beta_; }

  double value(double gamma) const;
  double slope(double gamma) const;
  double curvature(double gamma) const;

 private:
  double bias_j_;
  double beta_;
};

struct WellSet {
  double gamma_left_min = 0.0;
  double gamma_barrier_top = 0.0;
  double gamma_right_min = 0.0;
  double delta_u_left = 0.0;   // u(barrier) - u(left min), units of E_J
  double delta_u_right = 0.0;  // u(barrier) - u(right min), units of E_J
  // More than one min/max/min triplet exists (multiwell beta).
  bool ambiguous = false;
  std::size_t triplet_count = 1;
};

/// Locates the shallow-left / barrier / deep-right critical points.
/// Throws LeftWellAbsent for J > J*; at J = J* returns the degenerate set
/// with delta_u_left = 0.
WellSet find_wells(const PotentialProfile& profile);

/// Small-oscillation frequency of the cubic approximation to the left well,
/// omega_0 (1 - beta^-2)^(1/8) [2 (J* - J)]^(1/4), rad/s.
double plasma_frequency_left(const DerivedScales& scales, double bias_j);

/// Harmonic frequency at a well bottom from the exact curvature, rad/s.
double well_frequency(const DerivedScales& scales,
                      const PotentialProfile& profile, double gamma_min);

/// hbar omega at a well bottom in units of E_J.
double well_quantum_ej(const DerivedScales& scales,
                       const PotentialProfile& profile, double gamma_min);

/// Cubic-approximation count of left-well states.
double left_state_count(const DerivedScales& scales, double bias_j);

/// Delta U_L / hbar omega_L from the exact well geometry.
double left_state_count_geometric(const DerivedScales& scales,
                                  const PotentialProfile& profile,
                                  const WellSet& wells);

/// Delta U_R / hbar omega_R, harmonic estimate of the right-well state count.
double right_state_count_harmonic(const DerivedScales& scales,
                                  const PotentialProfile& profile,
                                  const WellSet& wells);

/// Inverse of left_state_count. Throws RegimeError if the result is <= 0.
double bias_for_target_nl(const DerivedScales& scales, double n_target);

}  // namespace mrt
