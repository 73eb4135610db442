#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrt/circuit_model.hpp"
#include "mrt/linalg.hpp"

namespace mrt {

inline constexpr std::size_t kDefaultGridPoints = 2048;
inline constexpr double kDefaultPadding = 0.25;
// Required ratio of the grid Nyquist wavenumber to the largest classical
// momentum of any retained state.
inline constexpr double kNyquistMargin = 1.15;

/// Uniform periodic grid gamma_i = gamma_min + i * spacing, i < n_points.
struct Grid {
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  std::size_t n_points = 0;

  double spacing() const {
    return (gamma_max - gamma_min) / static_cast<double>(n_points);
  }
  double node(std::size_t i) const {
    return gamma_min + spacing() * static_cast<double>(i);
  }
};

/// Grid whose edges sit where u exceeds e_max by padding * Delta U_R.
/// e_max_ghz is measured from the left-well bottom and must lie above the
/// barrier top. Throws ResolutionError if n_points cannot resolve the
/// fastest retained state.
Grid build_grid(const PotentialProfile& profile, const WellSet& wells,
                const DerivedScales& scales, double e_max_ghz,
                std::size_t n_points, double padding = kDefaultPadding);

/// One grid valid for every bias in [j_start, j_end]; e_max at each bias is
/// the barrier top plus margin_ghz.
Grid build_sweep_grid(const DerivedScales& scales, double j_start,
                      double j_end, double margin_ghz, std::size_t n_points,
                      double padding = kDefaultPadding);

/// Throws ResolutionError if pi / spacing < kNyquistMargin * sqrt(kinetic / lambda).
void check_resolution(const Grid& grid, double lambda, double max_kinetic_ej);

/// First row of the periodic Fourier-grid kinetic matrix, lambda * k^2 with
/// k_l = 2 pi l / (N spacing), l = -N/2+1 .. N/2.
std::vector<double> kinetic_row(const Grid& grid, double lambda);

linalg::SymmetricMatrix build_hamiltonian(
    const Grid& grid, double lambda,
    const std::function<double(double)>& potential);

linalg::SymmetricMatrix build_hamiltonian(const Grid& grid,
                                          const PotentialProfile& profile,
                                          const DerivedScales& scales);

/// H(J) = T + diag(gamma^2/2beta - cos gamma) - J diag(gamma) on a fixed grid,
/// so a sweep only rebuilds the diagonal.
class HamiltonianFamily {
 public:
  HamiltonianFamily(const Grid& grid, const DerivedScales& scales);

  const Grid& grid() const { return grid_; }
  linalg::SymmetricMatrix at(double bias_j) const;

 private:
  Grid grid_;
  linalg::SymmetricMatrix base_;
};

inline constexpr int kRightBranch = -1;
inline constexpr int kAboveBarrier = -2;

/// "H<n>" for left branch n, "V" for right-well states, "D" above the barrier.
std::string branch_label(int branch);

struct SpectralSolution {
  double bias_j = 0.0;
  Grid grid;
  double zero_level_ej = 0.0;    // u(gamma_L), the energy zero
  double barrier_top_ghz = 0.0;  // relative to the zero
  std::size_t first_index = 0;   // spectrum index of eigenvalues[0]
  std::vector<double> eigenvalues;   // GHz above the left-well bottom
  std::vector<double> eigenvectors;  // n_points x count, sum psi^2 dx = 1
  std::vector<double> p_left;
  std::vector<int> branch;  // n_L for left-localized states
  std::size_t n_right_below_zero = 0;

  std::size_t count() const { return eigenvalues.size(); }
  bool has_vectors() const { return !eigenvectors.empty(); }
  std::span<const double> eigenvector(std::size_t i) const;
  std::string label(std::size_t i) const;
  /// <gamma> of state i.
  double mean_gamma(std::size_t i) const;
  /// Largest |psi| at the two grid edges over all retained states.
  double max_edge_amplitude() const;
};

struct EigenRequest {
  std::optional<double> lower_ghz;  // unset: start at the ground state
  double upper_ghz = 0.0;
  std::size_t extra_above = 0;  // states beyond upper_ghz to include
  bool vectors = true;
};

/// Dense diagonalization of h for the requested window. Eigenvalues are
/// shifted so zero_level_ej maps to 0 and converted to GHz; eigenvectors are
/// grid-normalized and signed positive at their largest-magnitude node.
SpectralSolution eigensolve(linalg::SymmetricMatrix h, const Grid& grid,
                            const DerivedScales& scales, double bias_j,
                            double zero_level_ej, const EigenRequest& request);

/// Fills p_left (probability left of the barrier top) and branch labels.
/// A state is on a left branch when p_left > 0.5 and it lies below the
/// barrier; its ordinal is the rounded total left probability of the states
/// beneath it.
void classify_localization(SpectralSolution& solution, const WellSet& wells);

/// Full single-bias pipeline: wells, grid, Hamiltonian, every state up to
/// the barrier top plus extra_above, classified.
SpectralSolution solve_spectrum(const DerivedScales& scales, double bias_j,
                                std::size_t n_points = kDefaultGridPoints,
                                std::size_t extra_above = 10,
                                double padding = kDefaultPadding);

}  // namespace mrt
