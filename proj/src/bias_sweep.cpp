#include "mrt/bias_sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <string>
#include <thread>

#include "mrt/errors.hpp"
#include "mrt/linalg.hpp"
#include "mrt/numerics.hpp"

namespace mrt {

namespace {

double right_quantum_ghz(const DerivedScales& scales, double j) {
  const PotentialProfile profile(j, scales.beta);
  const WellSet wells = find_wells(profile);
  return scales.to_ghz(well_quantum_ej(scales, profile, wells.gamma_right_min));
}

double window_margin(const DerivedScales& scales, const SweepConfig& config) {
  return config.window_quanta *
         std::max(right_quantum_ghz(scales, config.j_start),
                  right_quantum_ghz(scales, config.j_end));
}

Grid sweep_grid(const DerivedScales& scales, const SweepConfig& config) {
  validate(config, scales);
  return build_sweep_grid(scales, config.j_start, config.j_end,
                          window_margin(scales, config), config.n_points,
                          config.padding);
}

// Left probability of a unit-norm (Euclidean) grid vector.
double left_weight(const double* v, const Grid& grid, double gamma_b) {
  double p = 0.0;
  for (std::size_t i = 0; i < grid.n_points && grid.node(i) < gamma_b; ++i) {
    p += v[i] * v[i];
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

void validate(const SweepConfig& c, const DerivedScales& scales) {
  if (!(c.j_start > 0.0)) throw ConfigError("sweep j_start must be > 0");
  if (!(c.j_start < c.j_end)) throw ConfigError("sweep needs j_start < j_end");
  if (!(c.j_end < scales.j_star)) {
    throw LeftWellAbsent("sweep j_end = " + std::to_string(c.j_end) +
                         " must be below J* = " + std::to_string(scales.j_star));
  }
  if (c.n_coarse < 2) throw ConfigError("sweep n_coarse must be >= 2");
  if (!(c.refine_tolerance_j > 0.0)) {
    throw ConfigError("sweep refine_tolerance_j must be > 0");
  }
  if (c.max_branch < 0) throw ConfigError("sweep max_branch must be >= 0");
  if (c.n_points < 4 || c.n_points % 2 != 0) {
    throw ConfigError("grid n_points must be even and >= 4");
  }
  if (!(c.window_quanta > 0.0)) throw ConfigError("window_quanta must be > 0");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
}

std::optional<std::size_t> BiasSample::branch_index(int n) const {
  for (std::size_t i = 0; i < branch.size(); ++i) {
    if (branch[i] == n) return first_index + i;
  }
  return std::nullopt;
}

SweepContext::SweepContext(const DerivedScales& scales,
                           const SweepConfig& config)
    : scales_(scales),
      config_(config),
      family_(sweep_grid(scales, config), scales) {
  margin_ghz_ = window_margin(scales, config);
}

SpectralSolution SweepContext::solve(double j, bool vectors) const {
  const PotentialProfile profile(j, scales_.beta);
  const WellSet wells = find_wells(profile);
  const double top = scales_.to_ghz(wells.delta_u_left);
  EigenRequest request;
  request.lower_ghz = -margin_ghz_;
  request.upper_ghz = top + margin_ghz_;
  request.vectors = vectors;
  SpectralSolution sol = eigensolve(family_.at(j), grid(), scales_, j,
                                    profile.value(wells.gamma_left_min),
                                    request);
  sol.barrier_top_ghz = top;
  if (vectors) classify_localization(sol, wells);
  return sol;
}

BiasSample make_sample(const SpectralSolution& sol, double gamma_left_min) {
  BiasSample s;
  s.j = sol.bias_j;
  s.first_index = sol.first_index;
  s.energies = sol.eigenvalues;
  s.p_left = sol.p_left;
  s.branch = sol.branch;
  s.mean_gamma.resize(sol.count());
  for (std::size_t i = 0; i < sol.count(); ++i) s.mean_gamma[i] = sol.mean_gamma(i);
  s.gamma_left_min = gamma_left_min;
  s.barrier_top_ghz = sol.barrier_top_ghz;
  s.n_right_below_zero = sol.n_right_below_zero;
  return s;
}

BiasSample SweepContext::sample(double j) const {
  return make_sample(solve(j, true),
                     find_wells(PotentialProfile(j, scales_.beta)).gamma_left_min);
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
            failed = true;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::vector<BiasSample> sample_all(const SweepContext& context,
                                   const std::vector<double>& js) {
  std::vector<BiasSample> out(js.size());
  parallel_for(js.size(), context.config().threads, [&](std::size_t i) {
    try {
      out[i] = context.sample(js[i]);
    } catch (const Error& e) {
      throw ConvergenceError("bias point J = " + std::to_string(js[i]) +
                             " failed: " + e.what());
    }
  });
  return out;
}

// Midpoints needed so that every tracked branch steps by at most one index.
std::vector<double> subdivision_points(const BranchTable& table) {
  std::set<double> mids;
  const auto& s = table.samples;
  for (int n = 0; n < table.config.max_branch; ++n) {
    std::optional<std::size_t> prev;
    for (std::size_t b = 0; b < s.size(); ++b) {
      const auto kb = s[b].branch_index(n);
      if (!kb) continue;
      if (prev) {
        const std::size_t a = *prev;
        const auto ka = s[a].branch_index(n);
        const bool bad = *kb < *ka || *kb - *ka >= 2;
        if (bad) {
          for (std::size_t i = a; i < b; ++i) {
            const double m = 0.5 * (s[i].j + s[i + 1].j);
            if (m > s[i].j && m < s[i + 1].j) mids.insert(m);
          }
        }
      }
      prev = b;
    }
  }
  return {mids.begin(), mids.end()};
}

}  // namespace

BranchTable run_sweep(const SweepContext& context) {
  const SweepConfig& c = context.config();
  BranchTable table;
  table.config = c;
  table.grid = context.grid();
  std::vector<double> js(c.n_coarse);
  for (std::size_t i = 0; i < c.n_coarse; ++i) {
    js[i] = i + 1 == c.n_coarse
                ? c.j_end
                : c.j_start + (c.j_end - c.j_start) * static_cast<double>(i) /
                                  static_cast<double>(c.n_coarse - 1);
  }
  table.samples = sample_all(context, js);
  for (int depth = 0; depth < c.max_subdivision; ++depth) {
    const std::vector<double> mids = subdivision_points(table);
    if (mids.empty()) break;
    std::vector<BiasSample> extra = sample_all(context, mids);
    table.samples.insert(table.samples.end(),
                         std::make_move_iterator(extra.begin()),
                         std::make_move_iterator(extra.end()));
    std::sort(table.samples.begin(), table.samples.end(),
              [](const BiasSample& x, const BiasSample& y) { return x.j < y.j; });
  }
  return table;
}

BranchTable run_sweep(const SweepConfig& config, const CircuitParams& params) {
  const SweepContext context(derive_scales(params), config);
  return run_sweep(context);
}

double CrossingBracket::predicted_j() const {
  const double ds = s_h - s_v;
  if (ds == 0.0) return 0.5 * (j_lo + j_hi);
  return std::clamp(j_lo + (e_v - e_h) / ds, j_lo, j_hi);
}

std::vector<CrossingBracket> detect_crossings(const BranchTable& table) {
  std::vector<CrossingBracket> out;
  const auto& s = table.samples;
  for (int n = 0; n < table.config.max_branch; ++n) {
    std::optional<std::size_t> prev;
    for (std::size_t b = 0; b < s.size(); ++b) {
      const auto kb = s[b].branch_index(n);
      if (!kb) continue;
      if (prev) {
        const BiasSample& lo = s[*prev];
        const BiasSample& hi = s[b];
        const std::size_t ka = *lo.branch_index(n);
        if (*kb < ka || *kb - ka >= 2) {
          throw ConvergenceError(
              "branch " + std::to_string(n) + " jumps from index " +
              std::to_string(ka) + " to " + std::to_string(*kb) +
              " between J = " + std::to_string(lo.j) + " and " +
              std::to_string(hi.j) + " after subdivision");
        }
        const auto in_window = [](const BiasSample& x, std::size_t k) {
          return k >= x.first_index && k < x.first_index + x.energies.size();
        };
        if (*kb == ka + 1 && in_window(lo, ka + 1) && in_window(hi, ka)) {
          CrossingBracket br;
          br.n_l = n;
          br.k_lower = ka;
          br.j_lo = lo.j;
          br.j_hi = hi.j;
          const double dj = hi.j - lo.j;
          br.e_h = lo.energy_at(ka);
          br.s_h = (hi.energy_at(ka + 1) - br.e_h) / dj;
          br.e_v = lo.energy_at(ka + 1);
          br.s_v = (hi.energy_at(ka) - br.e_v) / dj;
          out.push_back(br);
        }
      }
      prev = b;
    }
  }
  return out;
}

namespace {

struct CountingEvaluator {
  const PairEvaluator& f;
  int count = 0;
  PairState operator()(double j) {
    ++count;
    return f(j);
  }
};

struct SlopeFit {
  double slope_h = 0.0;
  double slope_v = 0.0;
};

// Diabatic energies recovered from the adiabatic pair under the two-level
// model: mean -/+ sqrt(g^2 - delta^2) / 2, H taken as the more-left state.
SlopeFit fit_diabats(CountingEvaluator& eval, double j_c, double delta,
                     double width, const RefineOptions& options) {
  static constexpr double kDistances[] = {3.0, 4.75, 6.5, 8.25, 10.0};
  std::vector<double> x;
  std::vector<double> eh;
  std::vector<double> ev;
  for (double side : {-1.0, 1.0}) {
    for (double d : kDistances) {
      const double j = j_c + side * d * width;
      if (j < options.j_min || j > options.j_max) continue;
      const PairState st = eval(j);
      const double mean = 0.5 * (st.lower + st.upper);
      const double g = st.gap();
      const double half = 0.5 * std::sqrt(std::max(g * g - delta * delta, 0.0));
      const bool h_lower = st.p_lower >= st.p_upper;
      x.push_back(j - j_c);
      eh.push_back(h_lower ? mean - half : mean + half);
      ev.push_back(h_lower ? mean + half : mean - half);
    }
  }
  if (x.size() < 3) {
    throw ConvergenceError("crossing at J = " + std::to_string(j_c) +
                           " is too wide for the bias window");
  }
  SlopeFit fit;
  fit.slope_h = numerics::fit_line(x, eh).slope;
  fit.slope_v = numerics::fit_line(x, ev).slope;
  return fit;
}

}  // namespace

RefinedPair refine_pair(const PairEvaluator& evaluate,
                        const CrossingBracket& bracket,
                        const RefineOptions& options) {
  CountingEvaluator eval{evaluate};
  const auto gap = [&](double j) { return eval(j).gap(); };
  double rel_slope = std::fabs(bracket.s_v - bracket.s_h);
  if (!(rel_slope > 0.0)) {
    throw ConvergenceError("crossing bracket has parallel diabats");
  }

  // Local bracket: in the two-level model the minimum lies within g/|ds| of
  // any point, so start there and widen until the centre is lowest.
  const double jp = bracket.predicted_j();
  const double gp = gap(jp);
  double h = 2.0 * gp / rel_slope;
  double a = 0.0;
  double b = 0.0;
  for (;;) {
    a = std::max(bracket.j_lo, jp - h);
    b = std::min(bracket.j_hi, jp + h);
    const bool full = a <= bracket.j_lo && b >= bracket.j_hi;
    if (full || (gap(a) > gp && gap(b) > gp)) break;
    h *= 4.0;
  }

  RefinedPair out;
  double tol = std::min(options.tolerance_j, 0.005 * gp / rel_slope);
  numerics::GoldenResult gr;
  for (int phase = 0; phase < 8; ++phase) {
    const int budget = options.max_evaluations - eval.count;
    if (budget < 4) throw ConvergenceError("gap minimization out of evaluations");
    gr = numerics::golden_section_minimize(gap, a, b, tol, budget);
    if (!gr.converged) {
      out.precision_limited = true;
      break;
    }
    const double width = gr.fx / rel_slope;
    if (gr.hi - gr.lo <= width / 50.0) break;
    a = gr.lo;
    b = gr.hi;
    tol = width / 200.0;
  }
  out.j_c = gr.x;
  out.delta_ghz = gr.fx;
  if (!(out.delta_ghz > 0.0)) {
    throw ConvergenceError("non-positive gap at J = " + std::to_string(out.j_c));
  }

  double width = out.delta_ghz / rel_slope;
  SlopeFit fit;
  for (int it = 0; it < 4; ++it) {
    fit = fit_diabats(eval, out.j_c, out.delta_ghz, width, options);
    const double next = out.delta_ghz / std::fabs(fit.slope_v - fit.slope_h);
    const bool settled = std::fabs(next - width) <= 0.2 * width;
    width = next;
    if (settled) break;
  }
  out.slope_h = fit.slope_h;
  out.slope_v = fit.slope_v;
  out.width_j = width;

  out.at_center = eval(out.j_c);
  out.energy_ghz = 0.5 * (out.at_center.lower + out.at_center.upper);
  const auto clamped = [&](double j) { return std::clamp(j, options.j_min, options.j_max); };
  const double norm = std::sqrt(2.0) * out.delta_ghz;
  out.two_level_residual =
      std::max(std::fabs(gap(clamped(out.j_c - width)) / norm - 1.0),
               std::fabs(gap(clamped(out.j_c + width)) / norm - 1.0));
  out.left_probe = eval(clamped(out.j_c - 3.0 * width));
  out.right_probe = eval(clamped(out.j_c + 3.0 * width));
  out.evaluations = eval.count;
  return out;
}

PairEvaluator make_pair_evaluator(const SweepContext& context,
                                  const CrossingBracket& bracket) {
  constexpr std::size_t kBlock = 6;
  constexpr double kResidual = 1e-10;
  auto warm = std::make_shared<std::vector<double>>();
  return [&context, bracket, warm](double j) {
    const DerivedScales& sc = context.scales();
    const Grid& grid = context.grid();
    const std::size_t n = grid.n_points;
    const PotentialProfile profile(j, sc.beta);
    const WellSet wells = find_wells(profile);
    const double zero = profile.value(wells.gamma_left_min);
    const double x = j - bracket.j_lo;
    const double mean_ghz =
        0.5 * (bracket.e_h + bracket.s_h * x + bracket.e_v + bracket.s_v * x);
    const double sigma = zero + sc.to_ej(mean_ghz);

    const linalg::NearestEigen ne = linalg::nearest_eigenpairs(
        context.family().at(j), sigma, kBlock, 2, *warm, kResidual);
    *warm = ne.vectors;

    std::vector<std::size_t> order(ne.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
      return std::fabs(ne.values[p] - sigma) < std::fabs(ne.values[q] - sigma);
    });
    std::size_t lo = order[0];
    std::size_t hi = order[1];
    if (ne.values[lo] > ne.values[hi]) std::swap(lo, hi);

    const double* vl = ne.vectors.data() + lo * n;
    const double* vu = ne.vectors.data() + hi * n;
    PairState st;
    st.j = j;
    st.lower = sc.to_ghz(ne.values[lo] - zero);
    st.upper = sc.to_ghz(ne.values[hi] - zero);
    st.p_lower = left_weight(vl, grid, wells.gamma_barrier_top);
    st.p_upper = left_weight(vu, grid, wells.gamma_barrier_top);
    // Left weight of (vl +- vu)/sqrt2 is (p_l + p_u)/2 +- the left overlap;
    // the overall sign of each Ritz vector is arbitrary, so report max/min.
    double overlap = 0.0;
    for (std::size_t i = 0; i < n && grid.node(i) < wells.gamma_barrier_top; ++i) {
      overlap += vl[i] * vu[i];
    }
    const double base = 0.5 * (st.p_lower + st.p_upper);
    st.p_plus = std::clamp(base + std::fabs(overlap), 0.0, 1.0);
    st.p_minus = std::clamp(base - std::fabs(overlap), 0.0, 1.0);
    return st;
  };
}

AvoidedCrossing refine_crossing(const SweepContext& context,
                                const CrossingBracket& bracket) {
  RefineOptions options;
  options.tolerance_j = context.config().refine_tolerance_j;
  options.j_min = context.config().j_start;
  options.j_max = context.config().j_end;
  const RefinedPair r =
      refine_pair(make_pair_evaluator(context, bracket), bracket, options);

  const SpectralSolution dense = context.solve(r.j_c, true);
  const std::size_t k = bracket.k_lower;
  if (k < dense.first_index || k + 1 >= dense.first_index + dense.count()) {
    throw ConvergenceError("refined crossing at J = " + std::to_string(r.j_c) +
                           " left the dense window");
  }
  const std::size_t i = k - dense.first_index;
  const double dense_gap = dense.eigenvalues[i + 1] - dense.eigenvalues[i];
  const double mismatch =
      std::max(std::fabs(dense.eigenvalues[i] - r.at_center.lower),
               std::fabs(dense.eigenvalues[i + 1] - r.at_center.upper));
  if (mismatch > 1e-3 * r.delta_ghz + 1e-9) {
    throw ConvergenceError(
        "refined pair at J = " + std::to_string(r.j_c) +
        " is not eigen-pair (" + std::to_string(k) + ", " +
        std::to_string(k + 1) + "): energy mismatch " +
        std::to_string(mismatch) + " GHz");
  }
  if (!(r.two_level_residual < kMaxTwoLevelResidual)) {
    throw ConvergenceError("crossing at J = " + std::to_string(r.j_c) +
                           " is not two-level: residual " +
                           std::to_string(r.two_level_residual) + ", gap " +
                           std::to_string(dense_gap * 1e3) + " MHz");
  }

  const DerivedScales& sc = context.scales();
  AvoidedCrossing c;
  c.n_l = bracket.n_l;
  c.k_lower = k;
  c.j_c = r.j_c;
  c.delta_mhz = dense_gap * 1e3;
  c.width_j = r.width_j;
  c.width_i = sc.critical_current * r.width_j;
  c.slope_h = r.slope_h;
  c.slope_v = r.slope_v;
  c.n_big_l = left_state_count(sc, r.j_c);
  c.energy_ghz = 0.5 * (dense.eigenvalues[i] + dense.eigenvalues[i + 1]);
  c.p_left_lower = dense.p_left[i];
  c.p_left_upper = dense.p_left[i + 1];
  c.p_left_before = r.left_probe.p_lower;
  c.p_left_after = r.right_probe.p_lower;
  c.p_plus = r.at_center.p_plus;
  c.p_minus = r.at_center.p_minus;
  c.two_level_residual = r.two_level_residual;
  c.precision_limited = r.precision_limited;
  c.observable = c.delta_mhz > kObservableGapMhz;
  return c;
}

SplittingCatalog build_catalog(const SweepConfig& config,
                               std::vector<AvoidedCrossing> crossings) {
  std::sort(crossings.begin(), crossings.end(),
            [](const AvoidedCrossing& x, const AvoidedCrossing& y) {
              return x.n_l != y.n_l ? x.n_l < y.n_l : x.j_c < y.j_c;
            });
  SplittingCatalog cat;
  cat.config = config;
  for (int n = 0; n < config.max_branch; ++n) {
    BranchSummary b;
    b.n_l = n;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& c : crossings) {
      if (c.n_l != n) continue;
      b.crossings.push_back(c);
      if (c.n_big_l >= n + 1.0 && c.delta_mhz >= 1e-6 &&
          c.two_level_residual < 0.1) {
        xs.push_back(c.n_big_l);
        ys.push_back(std::log(c.delta_mhz));
      }
    }
    b.fit_count = xs.size();
    if (xs.size() >= 3) b.log_slope = numerics::fit_line(xs, ys).slope;
    cat.branches.push_back(std::move(b));
  }
  cat.crossings = std::move(crossings);
  return cat;
}

SplittingCatalog splitting_catalog(const SweepContext& context,
                                   const BranchTable& table) {
  const std::vector<CrossingBracket> brackets = detect_crossings(table);
  std::vector<std::optional<AvoidedCrossing>> refined(brackets.size());
  std::vector<std::string> reasons(brackets.size());
  parallel_for(brackets.size(), context.config().threads, [&](std::size_t i) {
    try {
      refined[i] = refine_crossing(context, brackets[i]);
    } catch (const ConvergenceError& e) {
      reasons[i] = e.what();
    }
  });
  std::vector<AvoidedCrossing> crossings;
  std::vector<SkippedBracket> skipped;
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    if (refined[i]) {
      crossings.push_back(*refined[i]);
    } else {
      skipped.push_back({brackets[i], reasons[i]});
    }
  }
  SplittingCatalog cat = build_catalog(context.config(), std::move(crossings));
  cat.skipped = std::move(skipped);
  return cat;
}

SplittingCatalog splitting_catalog(const SweepConfig& config,
                                   const CircuitParams& params) {
  const SweepContext context(derive_scales(params), config);
  return splitting_catalog(context, run_sweep(context));
}

namespace {

// States carrying the left weight of branch n: their share of the cumulative
// left probability is centred within half a state of n + 1/2.
std::vector<std::size_t> branch_members(const BiasSample& s, int n) {
  std::vector<std::size_t> out;
  double below = 0.0;
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    const double p = s.p_left[i];
    const double centre = below + 0.5 * p;
    if (p >= 0.05 && s.energies[i] < s.barrier_top_ghz &&
        std::fabs(centre - (n + 0.5)) < 0.5) {
      out.push_back(i);
    }
    below += p;
  }
  return out;
}

double weighted_energy(const BiasSample& s, const std::vector<std::size_t>& idx) {
  double e = 0.0;
  double w = 0.0;
  for (std::size_t i : idx) {
    e += s.p_left[i] * s.energies[i];
    w += s.p_left[i];
  }
  return e / w;
}

}  // namespace

std::vector<TransitionPoint> transitions_at(const BiasSample& s, int from_n,
                                            int to_n, double window_ghz) {
  std::vector<TransitionPoint> out;
  const auto refs = branch_members(s, from_n);
  const auto targets = branch_members(s, to_n);
  if (refs.empty() || targets.empty()) return out;
  const double nominal = weighted_energy(s, targets) - weighted_energy(s, refs);
  bool pure = false;
  for (std::size_t r : refs) pure = pure || s.branch[r] == from_n;
  for (std::size_t r : refs) {
    for (std::size_t k = 0; k < s.energies.size(); ++k) {
      const double f = s.energies[k] - s.energies[r];
      if (std::fabs(f - nominal) > window_ghz) continue;
      TransitionPoint t;
      t.j = s.j;
      t.from_n = from_n;
      t.to_n = to_n;
      t.k_ref = s.first_index + r;
      t.k = s.first_index + k;
      t.frequency_ghz = f;
      t.p_left_ref = s.p_left[r];
      t.p_left = s.p_left[k];
      t.ref_present = pure;
      out.push_back(t);
    }
  }
  return out;
}

std::vector<TransitionPoint> transition_curves(
    const SweepContext& context, const BranchTable& table,
    const SplittingCatalog& catalog,
    const std::vector<std::pair<int, int>>& pairs,
    const TransitionOptions& options) {
  std::set<int> branches;
  for (const auto& [from, to] : pairs) {
    branches.insert(from);
    branches.insert(to);
  }
  std::vector<double> zoom;
  const std::size_t m = std::max<std::size_t>(options.zoom_points, 2);
  for (const auto& c : catalog.crossings) {
    if (!branches.count(c.n_l)) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
      const double j = c.j_c + t * options.zoom_widths * c.width_j;
      if (j > table.config.j_start && j < table.config.j_end) zoom.push_back(j);
    }
  }
  std::vector<BiasSample> samples = table.samples;
  std::vector<BiasSample> extra = sample_all(context, zoom);
  samples.insert(samples.end(), std::make_move_iterator(extra.begin()),
                 std::make_move_iterator(extra.end()));
  std::stable_sort(samples.begin(), samples.end(),
                   [](const BiasSample& x, const BiasSample& y) { return x.j < y.j; });

  std::vector<TransitionPoint> out;
  for (const auto& [from, to] : pairs) {
    for (const auto& s : samples) {
      auto pts = transitions_at(s, from, to, options.window_ghz);
      out.insert(out.end(), pts.begin(), pts.end());
    }
  }
  return out;
}

}  // namespace mrt
