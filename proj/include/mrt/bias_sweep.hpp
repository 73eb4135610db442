#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mrt/circuit_model.hpp"
#include "mrt/spectral_solver.hpp"

namespace mrt {

struct SweepConfig {
  double j_start = 0.0;
  double j_end = 0.0;
  std::size_t n_coarse = 400;
  double refine_tolerance_j = 1e-9;
  int max_branch = 5;  // branches n_L = 0 .. max_branch-1 are tracked
  std::size_t n_points = kDefaultGridPoints;
  double padding = kDefaultPadding;
  // Energy window kept at each bias: [-margin, barrier top + margin], with
  // margin = window_quanta * hbar omega_R.
  double window_quanta = 2.0;
  unsigned threads = 1;
  int max_subdivision = 8;
};

/// Throws ConfigError for j_start >= j_end, j_end >= J*, n_coarse < 2, ...
void validate(const SweepConfig& config, const DerivedScales& scales);

struct BiasSample {
  double j = 0.0;
  std::size_t first_index = 0;
  std::vector<double> energies;  // GHz
  std::vector<double> p_left;
  std::vector<int> branch;
  std::vector<double> mean_gamma;
  double gamma_left_min = 0.0;
  double barrier_top_ghz = 0.0;
  std::size_t n_right_below_zero = 0;

  /// Global index of the state carrying branch n, if present.
  std::optional<std::size_t> branch_index(int n) const;
  double energy_at(std::size_t k) const { return energies[k - first_index]; }
};

/// Copies a classified solution (with eigenvectors) into sample form.
BiasSample make_sample(const SpectralSolution& solution, double gamma_left_min);

struct BranchTable {
  SweepConfig config;
  Grid grid;
  std::vector<BiasSample> samples;  // ascending j
};

/// Shared, read-only state for evaluating the Hamiltonian family on one grid.
class SweepContext {
 public:
  SweepContext(const DerivedScales& scales, const SweepConfig& config);

  const DerivedScales& scales() const { return scales_; }
  const SweepConfig& config() const { return config_; }
  const Grid& grid() const { return family_.grid(); }
  const HamiltonianFamily& family() const { return family_; }
  double margin_ghz() const { return margin_ghz_; }

  /// Dense solve and classification at one bias, keeping the sweep window.
  SpectralSolution solve(double j, bool vectors = true) const;
  BiasSample sample(double j) const;

 private:
  DerivedScales scales_;
  SweepConfig config_;
  double margin_ghz_ = 0.0;
  HamiltonianFamily family_;
};

/// Runs `task(i)` for i < count on `threads` workers; results must be written
/// to preallocated, index-addressed slots. Rethrows the lowest-index failure.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task);

/// Coarse sweep followed by local subdivision wherever a tracked branch moves
/// by more than one index (or disappears) between neighbouring samples.
BranchTable run_sweep(const SweepContext& context);
BranchTable run_sweep(const SweepConfig& config, const CircuitParams& params);

struct CrossingBracket {
  int n_l = 0;
  std::size_t k_lower = 0;  // index of the left state at j_lo
  double j_lo = 0.0;
  double j_hi = 0.0;
  // Diabatic lines through the bracket ends: E = e + s (j - j_lo).
  double e_h = 0.0;
  double s_h = 0.0;
  double e_v = 0.0;
  double s_v = 0.0;

  /// Where the two diabatic lines meet.
  double predicted_j() const;
};

/// One bracket per branch-index step of exactly one. Throws ConvergenceError
/// if a tracked branch still jumps by two or more between samples.
std::vector<CrossingBracket> detect_crossings(const BranchTable& table);

/// Two lowest-adjacent eigenpairs of interest at one bias.
struct PairState {
  double j = 0.0;
  double lower = 0.0;  // GHz
  double upper = 0.0;
  double p_lower = 0.0;
  double p_upper = 0.0;
  double p_plus = 0.0;   // p_left of (psi_l + psi_u) / sqrt 2
  double p_minus = 0.0;  // p_left of (psi_l - psi_u) / sqrt 2
  double gap() const { return upper - lower; }
};

using PairEvaluator = std::function<PairState(double j)>;

struct RefineOptions {
  double tolerance_j = 1e-9;
  int max_evaluations = 400;
  // Bias range the evaluator accepts. Fit points outside are dropped; the
  // probes and residual points are clamped onto it.
  double j_min = -std::numeric_limits<double>::infinity();
  double j_max = std::numeric_limits<double>::infinity();
};

struct RefinedPair {
  double j_c = 0.0;
  double delta_ghz = 0.0;
  double width_j = 0.0;
  double slope_h = 0.0;  // GHz per unit J
  double slope_v = 0.0;
  double energy_ghz = 0.0;  // pair mean at j_c
  double two_level_residual = 0.0;
  PairState at_center;
  PairState left_probe;   // at j_c - 3 width_j
  PairState right_probe;  // at j_c + 3 width_j
  bool precision_limited = false;
  int evaluations = 0;
};

/// Golden-section minimization of the pair gap inside the bracket, then
/// two-level slope fits at 3..10 widths on each side. The evaluator must
/// return the same adjacent pair throughout the bracket.
RefinedPair refine_pair(const PairEvaluator& evaluate,
                        const CrossingBracket& bracket,
                        const RefineOptions& options);

struct AvoidedCrossing {
  int n_l = 0;
  std::size_t k_lower = 0;
  double j_c = 0.0;
  double delta_mhz = 0.0;
  double width_j = 0.0;
  double width_i = 0.0;  // A
  double slope_h = 0.0;
  double slope_v = 0.0;
  double n_big_l = 0.0;  // left_state_count at j_c
  double energy_ghz = 0.0;
  double p_left_lower = 0.0;
  double p_left_upper = 0.0;
  double p_left_before = 0.0;  // left state 3 widths below j_c
  double p_left_after = 0.0;   // same eigen-index 3 widths above j_c
  double p_plus = 0.0;
  double p_minus = 0.0;
  double two_level_residual = 0.0;
  bool precision_limited = false;
  bool observable = false;  // delta > 1 MHz
};

/// Pair evaluator on the context's grid: shift-invert iteration near the
/// bracket's diabatic prediction, warm-started from the previous call.
PairEvaluator make_pair_evaluator(const SweepContext& context,
                                  const CrossingBracket& bracket);

/// Refines one bracket and checks the result against a dense solve at j_c
/// (eigen-indices k_lower, k_lower + 1 and matching energies). Throws
/// ConvergenceError when the pair fails the two-level residual bound.
AvoidedCrossing refine_crossing(const SweepContext& context,
                                const CrossingBracket& bracket);

struct BranchSummary {
  int n_l = 0;
  std::vector<AvoidedCrossing> crossings;  // ascending j_c
  // Least squares ln(delta / MHz) against N_L over the fit set; nullopt if
  // fewer than three crossings qualify.
  std::optional<double> log_slope;
  std::size_t fit_count = 0;
};

// A bracket whose refinement failed, typically because the left level sits
// at the barrier top and the pair is no longer a two-level system.
struct SkippedBracket {
  CrossingBracket bracket;
  std::string reason;
};

struct SplittingCatalog {
  SweepConfig config;
  std::vector<AvoidedCrossing> crossings;  // by n_l, then j_c
  std::vector<BranchSummary> branches;
  std::vector<SkippedBracket> skipped;  // detection order
};

inline constexpr double kObservableGapMhz = 1.0;
// Refinements whose gap one width from J_c is off sqrt(2) delta by more than
// this are reported as skipped brackets.
inline constexpr double kMaxTwoLevelResidual = 0.1;

/// Crossings enter the per-branch slope fit when N_L >= n_l + 1 (the state
/// sits well below the barrier top), delta >= 1e-6 MHz and the two-level
/// residual is below 0.1.
SplittingCatalog build_catalog(const SweepConfig& config,
                               std::vector<AvoidedCrossing> crossings);

SplittingCatalog splitting_catalog(const SweepContext& context,
                                   const BranchTable& table);
SplittingCatalog splitting_catalog(const SweepConfig& config,
                                   const CircuitParams& params);

struct TransitionPoint {
  double j = 0.0;
  int from_n = 0;
  int to_n = 0;
  std::size_t k_ref = 0;
  std::size_t k = 0;
  double frequency_ghz = 0.0;
  double p_left_ref = 0.0;
  double p_left = 0.0;
  bool ref_present = true;  // a pure (p_left > 0.5) reference state exists
};

struct TransitionOptions {
  double window_ghz = 3.0;  // half-width around the nominal transition
  std::size_t zoom_points = 41;
  double zoom_widths = 6.0;
};

/// Transition frequencies E_k - E_ref for every state within the window of
/// each requested (from, to) pair. Reference states are the states carrying
/// the left weight of branch `from`: the pure H state away from crossings,
/// both members of the hybridized pair near one. Extra samples are placed
/// across each crossing of either branch inside the sweep.
std::vector<TransitionPoint> transition_curves(
    const SweepContext& context, const BranchTable& table,
    const SplittingCatalog& catalog,
    const std::vector<std::pair<int, int>>& pairs,
    const TransitionOptions& options = {});

/// Transitions for one already-computed sample.
std::vector<TransitionPoint> transitions_at(const BiasSample& sample,
                                            int from_n, int to_n,
                                            double window_ghz);

}  // namespace mrt
