#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "mrt/errors.hpp"
#include "mrt/observability.hpp"

using namespace mrt;

TEST_SUITE("observability") {

TEST_CASE("omega_L T1 bound arithmetic") {
  const double omega = 2 * M_PI * 10e9;
  const auto a = assess_observability(650, 500.0, omega, 10e-9, 1.0, 1e-3);
  CHECK(a.bound == doctest::Approx(628.3185307).epsilon(1e-9));
  CHECK_FALSE(a.observable);
  const auto b = assess_observability(650, 500.0, omega, 100e-9, 1.0, 1e-3);
  CHECK(b.bound == doctest::Approx(6283.185307).epsilon(1e-9));
  CHECK(b.observable);
  const auto c = assess_observability(650, 500.0, omega, 25e-9, 1.0, 1e-3);
  CHECK(c.observable);
  CHECK(c.ratio == doctest::Approx(650 / (omega * 25e-9)));
  // Gamma / h = N_R / (2 pi T1).
  CHECK(c.gamma_r_ghz == doctest::Approx(650 / (2 * M_PI * 25e-9) * 1e-9));
  CHECK(c.gamma_r_harmonic_ghz == doctest::Approx(500 / (2 * M_PI * 25e-9) * 1e-9));
}

TEST_CASE("the dissipationless limit is always observable") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto r = assess_observability(1'000'000, 1e6, 1e9, inf, 1.0, 1e-9);
  CHECK(r.observable);
  CHECK(r.gamma_r_ghz == 0.0);
  CHECK(r.coherent_regime);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(assess_observability(1, 1.0, 1.0, 0.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(assess_observability(1, 1.0, -1.0, 1.0, 1.0, 1.0), ConfigError);
  CircuitParams p = test::small_circuit();
  p.t1.reset();
  const DerivedScales s = derive_scales(p);
  const double j = bias_for_target_nl(s, 1.5);
  const SpectralSolution sol = solve_spectrum(s, j, 512);
  CHECK_THROWS_AS(observability_report(p, sol, s, j), ConfigError);
}

TEST_CASE("report on the small circuit uses the exact right-well count") {
  const CircuitParams p = test::small_circuit();
  const DerivedScales s = derive_scales(p);
  const double j = bias_for_target_nl(s, 1.5);
  const SpectralSolution sol = solve_spectrum(s, j, 512);
  const auto r = observability_report(p, sol, s, j);
  CHECK(r.n_r_exact == sol.n_right_below_zero);
  CHECK(r.omega_l == doctest::Approx(plasma_frequency_left(s, j)));
  CHECK(r.bound == doctest::Approx(r.omega_l * 25e-9));
  // The harmonic count undercounts an anharmonic well.
  CHECK(r.n_r_harmonic < static_cast<double>(r.n_r_exact));
}

}  // TEST_SUITE
