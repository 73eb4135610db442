#pragma once

#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mrt/circuit_model.hpp"

namespace mrt::wkb {

/// A potential u and its rise u(g + x) - u(g). Integrands next to a turning
/// point are built from the rise, so a + x is never rounded before u sees it.
/// The default rise just subtracts two values of u.
struct Potential {
  std::function<double(double)> value;
  std::function<double(double, double)> rise;

  template <class F>
    requires(!std::same_as<std::decay_t<F>, Potential>)
  Potential(F f)
      : value(f), rise([f](double g, double x) { return f(g + x) - f(g); }) {}
  Potential(std::function<double(double)> v,
            std::function<double(double, double)> r)
      : value(std::move(v)), rise(std::move(r)) {}

  double operator()(double g) const { return value(g); }
};

/// Root of u(gamma) = level between `inner` (u < level) and the first point
/// beyond it in the direction of `outer` where u >= level.
double turning_point(const Potential& u, double level, double inner,
                     double outer);

/// Integral over [a, b] of f(end, x), the integrand at gamma = end + x, split
/// at the midpoint. The left half uses end = a, x = s^2 and the right half
/// end = b, x = -s^2, so square-root endpoint behaviour becomes analytic.
double turning_point_integral(
    const std::function<double(double end, double x)>& f, double a, double b);

// The three integrals treat a and b as exact turning points: u(a) and u(b)
// stand in for the level, which removes the bisection residual.

/// Integral of sqrt(u - level) over the forbidden interval [a, b].
double forbidden_integral(const Potential& u, double a, double b);
/// Integral of sqrt(level - u) over the allowed interval [a, b].
double allowed_integral(const Potential& u, double a, double b);
/// Integral of 1 / sqrt(level - u) over the allowed interval [a, b].
double transit_integral(const Potential& u, double a, double b);

enum class Well { left, right };

struct TurningPoints {
  double barrier_left = 0.0;   // gamma_1
  double barrier_right = 0.0;  // gamma_2
  double left_outer = 0.0;     // outer wall of the left well
  double right_outer = 0.0;    // outer wall of the right well
};

/// All four classical turning points at an energy in GHz above the left-well
/// bottom. Throws DomainError outside (0, barrier top].
TurningPoints turning_points(const PotentialProfile& profile,
                             const WellSet& wells, const DerivedScales& scales,
                             double energy_ghz);

/// Dimensionless barrier action S = (1/hbar) int sqrt(2m (V - E)) dgamma.
double barrier_action(const PotentialProfile& profile, const WellSet& wells,
                      const DerivedScales& scales, double energy_ghz);

/// Classical oscillation period in seconds, sqrt(2m) int dgamma / sqrt(E - V)
/// across the chosen well.
double classical_period(const PotentialProfile& profile, const WellSet& wells,
                        const DerivedScales& scales, double energy_ghz,
                        Well well);

/// 2 pi hbar / T_cl as a frequency in GHz.
double level_spacing_ghz(const PotentialProfile& profile, const WellSet& wells,
                         const DerivedScales& scales, double energy_ghz,
                         Well well);

/// Bohr-Sommerfeld quantum number of the right well at this energy
/// (non-integer in general).
double right_quantum_number(const PotentialProfile& profile,
                            const WellSet& wells, const DerivedScales& scales,
                            double energy_ghz);

/// ln[(n + 1/2)^(n + 1/2) e^-(n + 1/2) / n!], real n >= 0.
double log_level_factor(double n);

/// Splitting from the WKB overlap formula in MHz; all factorial factors are
/// taken in log space.
double splitting_overlap(double delta_l_ghz, double delta_r_ghz, double n_l,
                         double m_r, double action);

/// Same formula with m_r -> infinity.
double splitting_overlap_deep(double delta_l_ghz, double delta_r_ghz,
                              double n_l, double action);

/// Cubic-well closed form in MHz.
double splitting_cubic(int n_l, double n_big_l, double delta_l_ghz,
                       double delta_r_ghz);

/// exp(18 N_L / 5).
double splitting_to_rate_ratio(double n_big_l);

struct WkbEstimate {
  int n_l = 0;
  double m_r = 0.0;
  double energy_ghz = 0.0;
  TurningPoints turning;
  double action_s = 0.0;
  double delta_l_ghz = 0.0;
  double delta_r_ghz = 0.0;
  double t_cl = 0.0;  // s, right well
  double n_big_l = 0.0;
  double delta_overlap_mhz = 0.0;
  double delta_cubic_mhz = 0.0;
};

/// Semiclassical estimate for left level n_l at bias J. Without an explicit
/// energy the level sits at hbar omega_L (n_l + 1/2) above the left-well
/// bottom, omega_L from the exact curvature.
WkbEstimate wkb_estimate(const DerivedScales& scales, double bias_j, int n_l,
                         std::optional<double> energy_ghz = std::nullopt);

struct DeepWellSweepPoint {
  double ec_over_ej = 0.0;
  double bias_j = 0.0;
  double n_r_harmonic = 0.0;
  double delta_l_ghz = 0.0;  // at the n_L = 0 level
  double delta_r_ghz = 0.0;
  double delta_mhz[3] = {0.0, 0.0, 0.0};  // n_L = 0, 1, 2, overlap formula
  double min_spacing_ghz[3] = {0.0, 0.0, 0.0};  // min(Delta_L, Delta_R) per level
  bool valid = true;
  std::string message;
};

/// E_C/E_J values logarithmically spaced over [ratio_min, ratio_max].
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// N_L fixed; for each ratio the bias is set by inverting the state-count
/// formula and everything is evaluated semiclassically. Points that violate
/// the regime are kept with valid = false.
std::vector<DeepWellSweepPoint> deep_well_sweep(
    double critical_current, double beta, double n_big_l,
    const std::vector<double>& ec_over_ej);

}  // namespace mrt::wkb
