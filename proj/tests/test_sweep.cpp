#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fixtures.hpp"
#include "mrt/bias_sweep.hpp"
#include "mrt/errors.hpp"
#include "mrt/tables.hpp"

using namespace mrt;

namespace {

// Exact two-level model: diabats through (jc, e0) coupled by delta / 2.
struct TwoLevel {
  double jc = 1.3, e0 = 10.0, s_h = -58.0, s_v = -12600.0, delta = 1e-3;

  PairState operator()(double j) const {
    const double eh = e0 + s_h * (j - jc);
    const double ev = e0 + s_v * (j - jc);
    const double d = eh - ev;
    const double root = std::sqrt(d * d + delta * delta);
    PairState st;
    st.j = j;
    st.lower = 0.5 * (eh + ev) - 0.5 * root;
    st.upper = 0.5 * (eh + ev) + 0.5 * root;
    st.p_lower = 0.5 * (1.0 - d / root);
    st.p_upper = 1.0 - st.p_lower;
    st.p_plus = 0.5 + 0.5 * delta / root;
    st.p_minus = 0.5 - 0.5 * delta / root;
    return st;
  }

  CrossingBracket bracket(double lo, double hi) const {
    CrossingBracket b;
    b.j_lo = lo;
    b.j_hi = hi;
    b.e_h = e0 + s_h * (lo - jc);
    b.s_h = s_h;
    b.e_v = e0 + s_v * (lo - jc);
    b.s_v = s_v;
    return b;
  }
};

SweepConfig small_sweep(const DerivedScales& s) {
  SweepConfig c;
  c.j_start = bias_for_target_nl(s, 2.5);
  c.j_end = bias_for_target_nl(s, 0.5);
  c.n_coarse = 60;
  c.max_branch = 2;
  c.n_points = 512;
  return c;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("refinement recovers an exact two-level crossing") {
  const TwoLevel model;
  const double w = model.delta / std::fabs(model.s_v - model.s_h);
  for (double offset : {-0.4, 0.0, 0.3}) {
    CAPTURE(offset);
    // Off-centre brackets: the diabats' prediction is exact here, so also
    // feed a biased bracket end to exercise the widening step.
    const CrossingBracket b = model.bracket(model.jc - 2e-3, model.jc + 1e-3 * (1 + offset));
    RefineOptions opt;
    opt.tolerance_j = 1e-12;
    const RefinedPair r = refine_pair(model, b, opt);
    CHECK(std::fabs(r.j_c - model.jc) < w / 20);
    CHECK(r.delta_ghz == doctest::Approx(model.delta).epsilon(1e-6));
    CHECK(r.slope_h == doctest::Approx(model.s_h).epsilon(1e-4));
    CHECK(r.slope_v == doctest::Approx(model.s_v).epsilon(1e-6));
    CHECK(r.width_j == doctest::Approx(w).epsilon(1e-4));
    CHECK(r.two_level_residual < 1e-4);
    CHECK(r.at_center.p_lower == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(r.left_probe.p_lower > 0.9);
    CHECK(r.right_probe.p_lower < 0.1);
    CHECK_FALSE(r.precision_limited);
  }
}

TEST_CASE("parallel_for covers every index and rethrows the first failure") {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  try {
    parallel_for(20, 3, [](std::size_t i) {
      if (i == 7 || i == 13) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a rethrow");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}

TEST_CASE("small circuit: crossings hybridize and swap character") {
  const DerivedScales s = derive_scales(test::small_circuit());
  const SweepContext ctx(s, small_sweep(s));
  const BranchTable table = run_sweep(ctx);
  const SplittingCatalog cat = splitting_catalog(ctx, table);
  REQUIRE(cat.crossings.size() >= 4);
  for (const auto& c : cat.crossings) CHECK(c.two_level_residual < kMaxTwoLevelResidual);
  std::size_t deep = 0;
  for (const auto& c : cat.crossings) {
    // Near the barrier top the pair stops being a two-level system.
    if (c.n_big_l < c.n_l + 1.0) continue;
    ++deep;
    CAPTURE(c.j_c);
    CAPTURE(c.n_l);
    CHECK(std::fabs(c.p_left_lower - 0.5) < 0.05);
    CHECK(std::fabs(c.p_left_upper - 0.5) < 0.05);
    CHECK(c.p_left_before > 0.9);
    CHECK(c.p_left_after < 0.1);
    CHECK(c.two_level_residual < 0.1);
    CHECK(c.delta_mhz > 0.0);
    CHECK(c.slope_v < c.slope_h);
  }
  CHECK(deep >= 6);
  // Brackets at the barrier top are reported, not refined.
  for (const auto& sk : cat.skipped) CHECK(left_state_count(s, sk.bracket.j_lo) < sk.bracket.n_l + 1.0);
  // Consecutive crossings on a branch sit one right-well level apart; the
  // index of the left state climbs by one each time.
  for (std::size_t i = 1; i < cat.crossings.size(); ++i) {
    const auto& a = cat.crossings[i - 1];
    const auto& b = cat.crossings[i];
    if (a.n_l == b.n_l) CHECK(b.k_lower == a.k_lower + 1);
  }
}

TEST_CASE("catalog bytes do not depend on the thread count") {
  const DerivedScales s = derive_scales(test::small_circuit());
  SweepConfig c = small_sweep(s);
  c.n_coarse = 30;
  c.max_branch = 1;
  const io::BiasAxis axis{s.critical_current, c.j_start};
  const SweepContext serial(s, c);
  const std::string a =
      io::to_csv(io::crossings_table(splitting_catalog(serial, run_sweep(serial)), axis));
  c.threads = 3;
  const SweepContext threaded(s, c);
  const std::string b =
      io::to_csv(io::crossings_table(splitting_catalog(threaded, run_sweep(threaded)), axis));
  CHECK(a == b);
}

TEST_CASE("transition frequencies from a synthetic sample") {
  BiasSample s;
  s.j = 1.0;
  s.first_index = 10;
  s.barrier_top_ghz = 100.0;
  s.energies = {1.0, 5.0, 13.0, 20.0};
  s.p_left = {1.0, 0.0, 1.0, 0.0};
  s.branch = {0, kRightBranch, 1, kRightBranch};
  const auto pts = transitions_at(s, 0, 1, 0.5);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].frequency_ghz == doctest::Approx(12.0));
  CHECK(pts[0].k_ref == 10);
  CHECK(pts[0].k == 12);
  CHECK(pts[0].ref_present);
  // A hybridized target splits the line into two weighted members.
  s.p_left = {1.0, 0.0, 0.5, 0.5};
  s.energies = {1.0, 5.0, 12.99, 13.01};
  s.branch = {0, kRightBranch, kRightBranch, 1};
  const auto hyb = transitions_at(s, 0, 1, 0.5);
  CHECK(hyb.size() == 2);
}

TEST_CASE("sweep configuration is validated") {
  const DerivedScales s = derive_scales(test::small_circuit());
  SweepConfig c = small_sweep(s);
  c.j_end = s.j_star + 0.01;
  CHECK_THROWS_AS(validate(c, s), LeftWellAbsent);
  c = small_sweep(s);
  c.n_points = 511;
  CHECK_THROWS_AS(validate(c, s), ConfigError);
}

}  // TEST_SUITE
