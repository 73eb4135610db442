#include <doctest.h>

#include <cmath>
#include <string>

#include "fixtures.hpp"
#include "mrt/circuit_model.hpp"
#include "mrt/constants.hpp"
#include "mrt/errors.hpp"
#include "mrt/numerics.hpp"

using namespace mrt;

namespace {

// Largest tilt the principal well survives: the maximum of gamma/beta +
// sin(gamma) on (0, pi), found without the closed form.
double numeric_critical_bias(double beta) {
  auto neg = [beta](double g) { return -(g / beta + std::sin(g)); };
  const auto r = numerics::golden_section_minimize(neg, 0.0, constants::pi,
                                                   1e-12, 500);
  return -r.fx;
}

}  // namespace

TEST_SUITE("circuit") {

TEST_CASE("modulation parameter of the reference circuit") {
  const DerivedScales s = derive_scales(test::paper_circuit());
  CHECK(s.beta == doctest::Approx(4.355).epsilon(0.002 / 4.355));
  // 2 pi I_c L / Phi_0 with Phi_0 = h / 2e spelled out.
  const double phi0 = 6.62607015e-34 / (2 * 1.602176634e-19);
  CHECK(s.beta == doctest::Approx(2 * M_PI * 8.531e-6 * 168e-12 / phi0)
                      .epsilon(1e-14));
}

TEST_CASE("energy scales against hand-evaluated formulas") {
  const DerivedScales s = derive_scales(test::paper_circuit());
  const double e = 1.602176634e-19, h = 6.62607015e-34;
  CHECK(s.e_j_ghz == doctest::Approx(8.531e-6 / (4 * M_PI * e) * 1e-9).epsilon(1e-14));
  CHECK(s.e_c_ghz == doctest::Approx(e * e / (2 * 1.2e-12 * h) * 1e-9).epsilon(1e-14));
  CHECK(s.lambda == doctest::Approx(4 * s.e_c_ghz / s.e_j_ghz).epsilon(1e-14));
  CHECK(s.omega0 == doctest::Approx(std::sqrt(8 * s.e_c * s.e_j) / constants::hbar)
                        .epsilon(1e-14));
}

TEST_CASE("effective mass identity") {
  const CircuitParams p = test::paper_circuit();
  const DerivedScales s = derive_scales(p);
  CHECK(s.effective_mass() == doctest::Approx(effective_mass(p)).epsilon(1e-14));
}

TEST_CASE("critical bias closed form against numeric extremum") {
  for (double beta : {2.0, 4.355, 4.5, 10.0}) {
    CAPTURE(beta);
    const double closed = critical_bias(beta);
    CHECK(std::fabs(closed / numeric_critical_bias(beta) - 1.0) < 1e-9);
  }
  // Leading correction at large beta is pi / (2 beta).
  CHECK((critical_bias(1e6) - 1.0) * 2e6 / M_PI == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(critical_bias(1.0), RegimeError);
}

TEST_CASE("left well disappears exactly at the critical bias") {
  const double beta = 4.355;
  const double js = critical_bias(beta);
  const WellSet w = find_wells(PotentialProfile(js - 1e-4, beta));
  CHECK(w.delta_u_left > 0.0);
  try {
    find_wells(PotentialProfile(js + 1e-6, beta));
    FAIL("expected LeftWellAbsent");
  } catch (const LeftWellAbsent& e) {
    CHECK(std::string(e.what()).find("J < J*") != std::string::npos);
  }
}

TEST_CASE("critical points are stationary with the right curvature") {
  for (double j : {0.5, 1.2, 1.36, 1.385}) {
    CAPTURE(j);
    const PotentialProfile u(j, 4.355);
    const WellSet w = find_wells(u);
    CHECK(std::fabs(u.slope(w.gamma_left_min)) < 1e-12);
    CHECK(std::fabs(u.slope(w.gamma_barrier_top)) < 1e-12);
    CHECK(std::fabs(u.slope(w.gamma_right_min)) < 1e-12);
    CHECK(u.curvature(w.gamma_left_min) > 0.0);
    CHECK(u.curvature(w.gamma_barrier_top) < 0.0);
    CHECK(u.curvature(w.gamma_right_min) > 0.0);
    CHECK(w.gamma_left_min < w.gamma_barrier_top);
    CHECK(w.gamma_barrier_top < w.gamma_right_min);
    if (j > 1.0) CHECK(w.delta_u_right > w.delta_u_left);
  }
}

TEST_CASE("state count inverts and matches the exact geometry near J*") {
  const DerivedScales s = derive_scales(test::paper_circuit());
  for (double n : {0.5, 1.0, 3.0, 6.0}) {
    const double j = bias_for_target_nl(s, n);
    CHECK(left_state_count(s, j) == doctest::Approx(n).epsilon(1e-12));
  }
  // The cubic expansion becomes exact as the well closes.
  const double j = s.j_star - 1e-7;
  const PotentialProfile u(j, s.beta);
  const WellSet w = find_wells(u);
  CHECK(left_state_count_geometric(s, u, w) / left_state_count(s, j) ==
        doctest::Approx(1.0).epsilon(1e-3));
  CHECK(well_frequency(s, u, w.gamma_left_min) / plasma_frequency_left(s, j) ==
        doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("invalid circuits are rejected") {
  CircuitParams p = test::paper_circuit();
  p.capacitance = -1.0;
  CHECK_THROWS_AS(derive_scales(p), ConfigError);
  p = test::paper_circuit();
  p.t1 = 0.0;
  CHECK_THROWS_AS(derive_scales(p), ConfigError);
  const DerivedScales s = derive_scales(test::paper_circuit());
  CHECK_THROWS_AS(bias_for_target_nl(s, 1e6), RegimeError);
}

}  // TEST_SUITE
