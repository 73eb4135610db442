#include "mrt/circuit_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mrt/constants.hpp"
#include "mrt/errors.hpp"
#include "mrt/numerics.hpp"

namespace mrt {

namespace {

constexpr double kScanStep = constants::pi / 64.0;
// |J - J*| below this is treated as the critical bias itself.
constexpr double kDegenerateBias = 1e-12;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void validate(const CircuitParams& params) {
  require_positive(params.capacitance, "capacitance");
  require_positive(params.inductance, "inductance");
  require_positive(params.critical_current, "critical_current");
  if (params.t1) {
    // t1 = +inf is the dissipationless limit and is allowed.
    if (!(*params.t1 > 0.0)) throw ConfigError("t1 must be positive");
  }
}

double DerivedScales::effective_mass() const {
  return constants::hbar * constants::hbar / (8.0 * e_c);
}

namespace {

DerivedScales finish_scales(double e_c, double e_j, double beta,
                            double critical_current) {
  DerivedScales s;
  s.e_c = e_c;
  s.e_j = e_j;
  s.e_c_ghz = e_c / constants::planck * 1e-9;
  s.e_j_ghz = e_j / constants::planck * 1e-9;
  s.beta = beta;
  s.omega0 = std::sqrt(8.0 * e_c * e_j) / constants::hbar;
  s.lambda = 4.0 * e_c / e_j;
  s.critical_current = critical_current;
  s.j_star = critical_bias(beta);
  s.i_star = critical_current * s.j_star;
  return s;
}

}  // namespace

DerivedScales derive_scales(const CircuitParams& params) {
  validate(params);
  const double e = constants::elementary_charge;
  const double e_c = e * e / (2.0 * params.capacitance);
  const double e_j =
      params.critical_current * constants::flux_quantum / (2.0 * constants::pi);
  const double beta = 2.0 * constants::pi * params.critical_current *
                      params.inductance / constants::flux_quantum;
  return finish_scales(e_c, e_j, beta, params.critical_current);
}

DerivedScales scales_from_ratio(double critical_current, double beta,
                                double ec_over_ej) {
  require_positive(critical_current, "critical_current");
  require_positive(ec_over_ej, "ec_over_ej");
  const double e_j =
      critical_current * constants::flux_quantum / (2.0 * constants::pi);
  return finish_scales(ec_over_ej * e_j, e_j, beta, critical_current);
}

double effective_mass(const CircuitParams& params) {
  const double reduced_flux = constants::flux_quantum / (2.0 * constants::pi);
  return params.capacitance * reduced_flux * reduced_flux;
}

double critical_bias(double beta) {
  if (!(beta > 1.0)) {
    throw RegimeError("critical bias requires beta > 1 (got beta = " +
                      std::to_string(beta) + ")");
  }
  const double inv = 1.0 / beta;
  return std::sqrt(1.0 - inv * inv) + inv * std::acos(-inv);
}

PotentialProfile::PotentialProfile(double bias_j, double beta)
    : bias_j_(bias_j), beta_(beta) {
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
}

double PotentialProfile::value(double gamma) const {
  return gamma * gamma / (2.0 * beta_) - std::cos(gamma) - bias_j_ * gamma;
}

double PotentialProfile::slope(double gamma) const {
  return gamma / beta_ + std::sin(gamma) - bias_j_;
}

double PotentialProfile::curvature(double gamma) const {
  return 1.0 / beta_ + std::cos(gamma);
}

WellSet find_wells(const PotentialProfile& profile) {
  const double beta = profile.beta();
  const double j = profile.bias();
  if (!(beta > 1.0)) {
    throw RegimeError("beta <= 1: the potential has a single well");
  }
  const double j_star = critical_bias(beta);
  if (j > j_star + kDegenerateBias) {
    throw LeftWellAbsent("left well absent: need J < J*, got J = " +
                         std::to_string(j) + " > J* = " + std::to_string(j_star));
  }
  const double g_star = std::acos(-1.0 / beta);
  const bool degenerate = j >= j_star - kDegenerateBias;

  // Critical points satisfy |gamma / beta - J| <= 1.
  const double lo = beta * (j - 1.0) - 1.0;
  const double hi = beta * (j + 1.0) + 1.0;
  std::vector<double> nodes;
  for (double g = lo; g < hi; g += kScanStep) nodes.push_back(g);
  nodes.push_back(hi);
  // Zeros of u'' split the axis into intervals on which u' is monotone, so
  // inserting them guarantees that closely spaced roots are still bracketed.
  const double period = 2.0 * constants::pi;
  for (double k = std::floor((lo - g_star) / period) - 1;
       k <= std::ceil((hi + g_star) / period) + 1; k += 1.0) {
    for (double g : {k * period + g_star, k * period - g_star}) {
      if (g > lo && g < hi) nodes.push_back(g);
    }
  }
  std::sort(nodes.begin(), nodes.end());

  auto slope = [&](double g) { return profile.slope(g); };
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    const double fa = slope(a);
    const double fb = slope(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
      roots.push_back(numerics::bisect_root(slope, a, b));
    }
  }

  WellSet wells;
  if (degenerate) {
    // The left minimum and the barrier merge at the principal inflection.
    double right = 0.0;
    bool found = false;
    for (double r : roots) {
      if (r > g_star + 1e-6 && profile.curvature(r) > 0.0) {
        right = r;
        found = true;
        break;
      }
    }
    if (!found) throw RegimeError("no right well at the critical bias");
    wells.gamma_left_min = g_star;
    wells.gamma_barrier_top = g_star;
    wells.gamma_right_min = right;
    wells.delta_u_left = 0.0;
    wells.delta_u_right = profile.value(g_star) - profile.value(right);
    return wells;
  }

  std::size_t triplets = 0;
  std::size_t chosen = roots.size();
  for (std::size_t i = 0; i + 2 < roots.size(); ++i) {
    const bool is_triplet = profile.curvature(roots[i]) > 0.0 &&
                            profile.curvature(roots[i + 1]) < 0.0 &&
                            profile.curvature(roots[i + 2]) > 0.0;
    if (!is_triplet) continue;
    ++triplets;
    // Principal branch: the well that vanishes at J* straddles g_star.
    if (roots[i] < g_star && g_star < roots[i + 1]) chosen = i;
  }
  if (chosen == roots.size()) {
    throw RegimeError("no double well at J = " + std::to_string(j) +
                      " (barrier or right well missing)");
  }
  wells.gamma_left_min = roots[chosen];
  wells.gamma_barrier_top = roots[chosen + 1];
  wells.gamma_right_min = roots[chosen + 2];
  const double top = profile.value(wells.gamma_barrier_top);
  wells.delta_u_left = top - profile.value(wells.gamma_left_min);
  wells.delta_u_right = top - profile.value(wells.gamma_right_min);
  wells.triplet_count = triplets;
  wells.ambiguous = triplets > 1;
  return wells;
}

double plasma_frequency_left(const DerivedScales& scales, double bias_j) {
  const double dj = scales.j_star - bias_j;
  if (dj < -kDegenerateBias) {
    throw LeftWellAbsent("plasma frequency undefined for J > J*");
  }
  if (dj <= 0.0) return 0.0;
  const double inv = 1.0 / scales.beta;
  return scales.omega0 * std::pow(1.0 - inv * inv, 0.125) *
         std::pow(2.0 * dj, 0.25);
}

double well_quantum_ej(const DerivedScales& scales,
                       const PotentialProfile& profile, double gamma_min) {
  const double k = profile.curvature(gamma_min);
  if (k <= 0.0) return 0.0;
  return std::sqrt(2.0 * scales.lambda * k);
}

double well_frequency(const DerivedScales& scales,
                      const PotentialProfile& profile, double gamma_min) {
  return well_quantum_ej(scales, profile, gamma_min) * scales.e_j /
         constants::hbar;
}

double left_state_count(const DerivedScales& scales, double bias_j) {
  const double dj = scales.j_star - bias_j;
  if (dj < -kDegenerateBias) {
    throw LeftWellAbsent("left-well state count undefined for J > J*");
  }
  if (dj <= 0.0) return 0.0;
  const double inv = 1.0 / scales.beta;
  return std::pow(2.0, 0.75) / 3.0 * std::sqrt(scales.e_j / scales.e_c) *
         std::pow(1.0 - inv * inv, -0.375) * std::pow(dj, 1.25);
}

double left_state_count_geometric(const DerivedScales& scales,
                                  const PotentialProfile& profile,
                                  const WellSet& wells) {
  const double quantum = well_quantum_ej(scales, profile, wells.gamma_left_min);
  if (quantum <= 0.0) return 0.0;
  return wells.delta_u_left / quantum;
}

double right_state_count_harmonic(const DerivedScales& scales,
                                  const PotentialProfile& profile,
                                  const WellSet& wells) {
  return wells.delta_u_right /
         well_quantum_ej(scales, profile, wells.gamma_right_min);
}

double bias_for_target_nl(const DerivedScales& scales, double n_target) {
  if (n_target < 0.0) throw ConfigError("target N_L must be non-negative");
  const double inv = 1.0 / scales.beta;
  const double base = 3.0 * n_target * std::pow(2.0, -0.75) *
                      std::sqrt(scales.e_c / scales.e_j) *
                      std::pow(1.0 - inv * inv, 0.375);
  const double j = scales.j_star - std::pow(base, 0.8);
  if (!(j > 0.0)) {
    throw RegimeError("N_L = " + std::to_string(n_target) +
                      " requires J <= 0; outside the double-well regime");
  }
  return j;
}

}  // namespace mrt
