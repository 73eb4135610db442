#include "mrt/wkb.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "mrt/constants.hpp"
#include "mrt/errors.hpp"
#include "mrt/numerics.hpp"

namespace mrt::wkb {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr unsigned kMaxDepth = 20;
constexpr double kQuadTolerance = 1e-12;

double integrate(const std::function<double(double)>& g, double lo, double hi) {
  return gauss_kronrod<double, 31>::integrate(g, lo, hi, kMaxDepth,
                                              kQuadTolerance);
}

// Measured from the left-well bottom. The rise 2 sin(g + x/2) sin(x/2) form
// of the cosine difference keeps full relative precision for small x.
Potential as_potential(const PotentialProfile& profile, const WellSet& wells) {
  const double g0 = wells.gamma_left_min;
  const double beta = profile.beta();
  const double j = profile.bias();
  auto rise = [=](double g, double x) {
    return x * (g / beta - j) + x * x / (2.0 * beta) +
           2.0 * std::sin(g + 0.5 * x) * std::sin(0.5 * x);
  };
  return Potential([=](double g) { return rise(g0, g - g0); }, rise);
}

}  // namespace

double turning_point(const Potential& u, double level, double inner,
                     double outer) {
  if (!(u(inner) < level)) {
    throw DomainError("turning_point: inner point is not classically allowed");
  }
  const double dir = outer > inner ? 1.0 : -1.0;
  double a = inner;
  double b = outer;
  double step = std::fabs(outer - inner);
  // Walk outward until the potential reaches the level.
  while (u(b) < level) {
    a = b;
    step *= 2.0;
    b += dir * step;
    if (step > 1e8) throw DomainError("turning_point: no turning point found");
  }
  return numerics::bisect_root([&](double g) { return u(g) - level; }, a, b);
}

double turning_point_integral(
    const std::function<double(double end, double x)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  const double r = std::sqrt(0.5 * (b - a));
  const double left =
      integrate([&](double s) { return 2.0 * s * f(a, s * s); }, 0.0, r);
  const double right =
      integrate([&](double s) { return 2.0 * s * f(b, -s * s); }, 0.0, r);
  return left + right;
}

double forbidden_integral(const Potential& u, double a, double b) {
  return turning_point_integral(
      [&](double end, double x) {
        return std::sqrt(std::max(u.rise(end, x), 0.0));
      },
      a, b);
}

double allowed_integral(const Potential& u, double a, double b) {
  return turning_point_integral(
      [&](double end, double x) {
        return std::sqrt(std::max(-u.rise(end, x), 0.0));
      },
      a, b);
}

double transit_integral(const Potential& u, double a, double b) {
  return turning_point_integral(
      [&](double end, double x) {
        const double d = -u.rise(end, x);
        return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
      },
      a, b);
}

TurningPoints turning_points(const PotentialProfile& profile,
                             const WellSet& wells, const DerivedScales& scales,
                             double energy_ghz) {
  const double top = scales.to_ghz(wells.delta_u_left);
  if (!(energy_ghz > 0.0) || energy_ghz > top) {
    throw DomainError("energy " + std::to_string(energy_ghz) +
                      " GHz outside (0, barrier top = " + std::to_string(top) +
                      " GHz]");
  }
  const Potential u = as_potential(profile, wells);
  const double level = scales.to_ej(energy_ghz);
  TurningPoints tp;
  if (energy_ghz == top) {
    tp.barrier_left = tp.barrier_right = wells.gamma_barrier_top;
  } else {
    tp.barrier_left = numerics::bisect_root(
        [&](double g) { return u(g) - level; }, wells.gamma_left_min,
        wells.gamma_barrier_top);
    tp.barrier_right = numerics::bisect_root(
        [&](double g) { return u(g) - level; }, wells.gamma_barrier_top,
        wells.gamma_right_min);
  }
  tp.left_outer = turning_point(u, level, wells.gamma_left_min,
                                wells.gamma_left_min - 0.1);
  tp.right_outer = turning_point(u, level, wells.gamma_right_min,
                                 wells.gamma_right_min + 0.1);
  return tp;
}

double barrier_action(const PotentialProfile& profile, const WellSet& wells,
                      const DerivedScales& scales, double energy_ghz) {
  const TurningPoints tp = turning_points(profile, wells, scales, energy_ghz);
  if (tp.barrier_left == tp.barrier_right) return 0.0;
  return forbidden_integral(as_potential(profile, wells), tp.barrier_left,
                            tp.barrier_right) /
         std::sqrt(scales.lambda);
}

double classical_period(const PotentialProfile& profile, const WellSet& wells,
                        const DerivedScales& scales, double energy_ghz,
                        Well well) {
  const TurningPoints tp = turning_points(profile, wells, scales, energy_ghz);
  const double a = well == Well::left ? tp.left_outer : tp.barrier_right;
  const double b = well == Well::left ? tp.barrier_left : tp.right_outer;
  const double dimensionless =
      transit_integral(as_potential(profile, wells), a, b) /
      std::sqrt(scales.lambda);
  return dimensionless * constants::hbar / scales.e_j;
}

double level_spacing_ghz(const PotentialProfile& profile, const WellSet& wells,
                         const DerivedScales& scales, double energy_ghz,
                         Well well) {
  return 1e-9 / classical_period(profile, wells, scales, energy_ghz, well);
}

double right_quantum_number(const PotentialProfile& profile,
                            const WellSet& wells, const DerivedScales& scales,
                            double energy_ghz) {
  const TurningPoints tp = turning_points(profile, wells, scales, energy_ghz);
  const double area = allowed_integral(as_potential(profile, wells),
                                       tp.barrier_right, tp.right_outer);
  return std::max(area / (constants::pi * std::sqrt(scales.lambda)) - 0.5, 0.0);
}

double log_level_factor(double n) {
  if (n < 0.0) throw DomainError("quantum number must be >= 0");
  const double h = n + 0.5;
  return h * std::log(h) - h - std::lgamma(n + 1.0);
}

double splitting_overlap(double delta_l_ghz, double delta_r_ghz, double n_l,
                         double m_r, double action) {
  if (!(delta_l_ghz > 0.0) || !(delta_r_ghz > 0.0)) {
    throw DomainError("level spacings must be positive");
  }
  const double log_delta =
      0.5 * (std::log(2.0 * delta_l_ghz * delta_r_ghz / constants::pi) +
             log_level_factor(n_l) + log_level_factor(m_r)) -
      action;
  return std::exp(log_delta) * 1e3;
}

double splitting_overlap_deep(double delta_l_ghz, double delta_r_ghz,
                              double n_l, double action) {
  const double log_delta =
      0.5 * (std::log(2.0 * delta_l_ghz * delta_r_ghz / constants::pi) +
             log_level_factor(n_l) - 0.5 * std::log(2.0 * constants::pi)) -
      action;
  return std::exp(log_delta) * 1e3;
}

double splitting_cubic(int n_l, double n_big_l, double delta_l_ghz,
                       double delta_r_ghz) {
  if (n_l < 0 || !(n_big_l > 0.0)) {
    throw DomainError("splitting_cubic needs n_l >= 0 and N_L > 0");
  }
  const double log_delta =
      0.5 * (std::log(std::sqrt(2.0) * delta_l_ghz * delta_r_ghz) -
             std::lgamma(n_l + 1.0) - 1.5 * std::log(constants::pi)) +
      0.5 * (n_l + 0.5) * std::log(432.0 * n_big_l) - 3.6 * n_big_l;
  return std::exp(log_delta) * 1e3;
}

double splitting_to_rate_ratio(double n_big_l) { return std::exp(3.6 * n_big_l); }

WkbEstimate wkb_estimate(const DerivedScales& scales, double bias_j, int n_l,
                         std::optional<double> energy_ghz) {
  if (n_l < 0) throw DomainError("n_l must be >= 0");
  const PotentialProfile profile(bias_j, scales.beta);
  const WellSet wells = find_wells(profile);
  const double quantum_l =
      scales.to_ghz(well_quantum_ej(scales, profile, wells.gamma_left_min));
  WkbEstimate w;
  w.n_l = n_l;
  w.energy_ghz = energy_ghz.value_or(quantum_l * (n_l + 0.5));
  w.turning = turning_points(profile, wells, scales, w.energy_ghz);
  w.action_s = barrier_action(profile, wells, scales, w.energy_ghz);
  w.delta_l_ghz =
      level_spacing_ghz(profile, wells, scales, w.energy_ghz, Well::left);
  w.t_cl = classical_period(profile, wells, scales, w.energy_ghz, Well::right);
  w.delta_r_ghz = 1e-9 / w.t_cl;
  w.m_r = right_quantum_number(profile, wells, scales, w.energy_ghz);
  w.n_big_l = left_state_count(scales, bias_j);
  w.delta_overlap_mhz =
      splitting_overlap(w.delta_l_ghz, w.delta_r_ghz, n_l, w.m_r, w.action_s);
  w.delta_cubic_mhz = w.n_big_l > 0.0
                        ? splitting_cubic(n_l, w.n_big_l, w.delta_l_ghz, w.delta_r_ghz)
                        : 0.0;
  return w;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw ConfigError("log_spaced needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  out.back() = hi;
  out.front() = lo;
  return out;
}

std::vector<DeepWellSweepPoint> deep_well_sweep(
    double critical_current, double beta, double n_big_l,
    const std::vector<double>& ec_over_ej) {
  std::vector<DeepWellSweepPoint> out;
  std::vector<double> ratios = ec_over_ej;
  std::sort(ratios.begin(), ratios.end());
  for (double r : ratios) {
    DeepWellSweepPoint p;
    p.ec_over_ej = r;
    try {
      const DerivedScales scales = scales_from_ratio(critical_current, beta, r);
      p.bias_j = bias_for_target_nl(scales, n_big_l);
      const PotentialProfile profile(p.bias_j, scales.beta);
      const WellSet wells = find_wells(profile);
      if (wells.ambiguous) {
        p.valid = false;
        p.message = "more than one well triplet";
      }
      p.n_r_harmonic = right_state_count_harmonic(scales, profile, wells);
      for (int n = 0; n < 3; ++n) {
        const WkbEstimate w = wkb_estimate(scales, p.bias_j, n);
        if (n == 0) {
          p.delta_l_ghz = w.delta_l_ghz;
          p.delta_r_ghz = w.delta_r_ghz;
        }
        p.delta_mhz[n] = w.delta_overlap_mhz;
        p.min_spacing_ghz[n] = std::min(w.delta_l_ghz, w.delta_r_ghz);
      }
    } catch (const RegimeError& e) {
      p.valid = false;
      p.message = e.what();
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace mrt::wkb
