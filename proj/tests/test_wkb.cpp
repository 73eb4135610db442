#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mrt/errors.hpp"
#include "mrt/wkb.hpp"

using namespace mrt;
using namespace mrt::wkb;

namespace {

// Brute-force midpoint rule on a fine grid: no substitution, no adaptivity.
template <class F>
double midpoint(F f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += f(a + (i + 0.5) * h);
  return sum * h;
}

}  // namespace

TEST_SUITE("wkb") {

TEST_CASE("closed-form integrals of model wells") {
  // Harmonic u = k x^2 at level E: turning points +-sqrt(E/k).
  const double k = 2.5, e = 0.7, xt = std::sqrt(e / k);
  const Potential harmonic([k, e](double x) { return k * x * x - e; });
  CHECK(transit_integral(harmonic, -xt, xt) ==
        doctest::Approx(M_PI / std::sqrt(k)).epsilon(1e-12));
  CHECK(allowed_integral(harmonic, -xt, xt) ==
        doctest::Approx(M_PI * e / (2 * std::sqrt(k))).epsilon(1e-12));
  // Cubic u = x^2 - x^3 at zero energy: int_0^1 x sqrt(1 - x) dx = 4/15,
  // which is 18/5 times Delta U / hbar omega in these units.
  const Potential cubic([](double x) { return x * x - x * x * x; });
  const double s = forbidden_integral(cubic, 0.0, 1.0);
  CHECK(s == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
  const double lambda = 1e-4;
  const double n_big_l = (4.0 / 27.0) / std::sqrt(2.0 * lambda * 2.0);
  CHECK(s / std::sqrt(lambda) == doctest::Approx(18.0 * n_big_l / 5.0).epsilon(1e-12));
}

TEST_CASE("barrier action against a brute-force quadrature") {
  const DerivedScales sc = derive_scales(test::paper_circuit());
  const double j = bias_for_target_nl(sc, 3.0);
  const PotentialProfile u(j, sc.beta);
  const WellSet w = find_wells(u);
  const double e = 5.0;
  const TurningPoints tp = turning_points(u, w, sc, e);
  const double level = u.value(w.gamma_left_min) + sc.to_ej(e);
  const double brute = midpoint(
      [&](double g) { return std::sqrt(std::max(u.value(g) - level, 0.0)); },
      tp.barrier_left, tp.barrier_right, 2'000'000);
  CHECK(barrier_action(u, w, sc, e) ==
        doctest::Approx(brute / std::sqrt(sc.lambda)).epsilon(1e-7));
  // Turning points really are on the level.
  CHECK(std::fabs(u.value(tp.barrier_left) - level) < 1e-13);
  CHECK(std::fabs(u.value(tp.right_outer) - level) < 1e-13);
}

TEST_CASE("level factor follows Stirling: ratio to the deep limit is 1 + 1/(48 m)") {
  for (double m : {100.0, 1000.0, 1e4, 1e5}) {
    CAPTURE(m);
    const double full = splitting_overlap(3.0, 4.0, 1.0, m, 2.0);
    const double deep = splitting_overlap_deep(3.0, 4.0, 1.0, 2.0);
    CHECK((full / deep - 1.0) * 48.0 * m == doctest::Approx(1.0).epsilon(2e-2));
  }
  CHECK(log_level_factor(0.0) == doctest::Approx(0.5 * std::log(0.5) - 0.5).epsilon(1e-15));
  CHECK_THROWS_AS(log_level_factor(-1.0), DomainError);
}

TEST_CASE("energies outside the well are rejected") {
  const DerivedScales sc = derive_scales(test::paper_circuit());
  const double j = bias_for_target_nl(sc, 3.0);
  const PotentialProfile u(j, sc.beta);
  const WellSet w = find_wells(u);
  CHECK_THROWS_AS(turning_points(u, w, sc, -1.0), DomainError);
  CHECK_THROWS_AS(turning_points(u, w, sc, sc.to_ghz(w.delta_u_left) * 1.01), DomainError);
  CHECK_THROWS_AS(wkb_estimate(sc, j, 3), DomainError);
}

TEST_CASE("overlap and cubic forms agree for a cubic-like well") {
  const DerivedScales sc = derive_scales(test::paper_circuit());
  for (double n_big_l : {2.0, 3.0, 4.0, 5.0}) {
    const double j = bias_for_target_nl(sc, n_big_l);
    for (int n = 0; n < 2; ++n) {
      CAPTURE(n_big_l);
      CAPTURE(n);
      const WkbEstimate w = wkb_estimate(sc, j, n);
      const double r = w.delta_overlap_mhz / w.delta_cubic_mhz;
      CHECK(r > 0.5);
      CHECK(r < 2.0);
    }
  }
}

TEST_CASE("rate ratio and spacings") {
  CHECK(splitting_to_rate_ratio(1.0) == doctest::Approx(std::exp(3.6)));
  const DerivedScales sc = derive_scales(test::paper_circuit());
  const double j = bias_for_target_nl(sc, 3.0);
  const PotentialProfile u(j, sc.beta);
  const WellSet w = find_wells(u);
  // Near the left-well bottom the classical period is 2 pi / omega.
  const double quantum = sc.to_ghz(well_quantum_ej(sc, u, w.gamma_left_min));
  CHECK(level_spacing_ghz(u, w, sc, 1e-3 * quantum, Well::left) ==
        doctest::Approx(quantum).epsilon(1e-3));
}

TEST_CASE("deep-well sweep keeps the bias on the requested N_L") {
  const auto ratios = log_spaced(1e-6, 1e-2, 9);
  CHECK(ratios.front() == 1e-6);
  CHECK(ratios.back() == 1e-2);
  const auto pts = deep_well_sweep(10e-6, 4.5, 3.0, ratios);
  REQUIRE(pts.size() == 9);
  for (const auto& p : pts) {
    CAPTURE(p.ec_over_ej);
    REQUIRE(p.valid);
    const DerivedScales sc = scales_from_ratio(10e-6, 4.5, p.ec_over_ej);
    CHECK(left_state_count(sc, p.bias_j) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(p.delta_mhz[0] < p.delta_mhz[1]);
    CHECK(p.delta_mhz[1] < p.delta_mhz[2]);
  }
}

}  // TEST_SUITE
