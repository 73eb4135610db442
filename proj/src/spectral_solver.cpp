#include "mrt/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrt/constants.hpp"
#include "mrt/errors.hpp"
#include "mrt/numerics.hpp"

namespace mrt {

namespace {

// Outermost gamma on the given side of `from` where u first reaches level.
double edge_at_level(const PotentialProfile& profile, double from, double level,
                     double direction) {
  double inner = from;
  double step = 0.25;
  double outer = from + direction * step;
  while (profile.value(outer) < level) {
    inner = outer;
    step *= 1.5;
    outer += direction * step;
    if (std::fabs(outer - from) > 1e6) {
      throw RegimeError("potential never reaches the padding level");
    }
  }
  return numerics::bisect_root(
      [&](double g) { return profile.value(g) - level; }, inner, outer);
}

}  // namespace

void check_resolution(const Grid& grid, double lambda, double max_kinetic_ej) {
  const double nyquist = constants::pi / grid.spacing();
  const double needed = std::sqrt(std::max(max_kinetic_ej, 0.0) / lambda);
  if (nyquist < kNyquistMargin * needed) {
    throw ResolutionError(
        "grid of " + std::to_string(grid.n_points) + " points over [" +
        std::to_string(grid.gamma_min) + ", " + std::to_string(grid.gamma_max) +
        "] has Nyquist wavenumber " + std::to_string(nyquist) +
        " < " + std::to_string(kNyquistMargin) + " x max momentum " +
        std::to_string(needed));
  }
}

Grid build_grid(const PotentialProfile& profile, const WellSet& wells,
                const DerivedScales& scales, double e_max_ghz,
                std::size_t n_points, double padding) {
  if (n_points < 4 || n_points % 2 != 0) {
    throw ConfigError("grid n_points must be even and >= 4");
  }
  if (!(padding >= 0.0)) throw ConfigError("grid padding must be >= 0");
  const double zero = profile.value(wells.gamma_left_min);
  const double top = profile.value(wells.gamma_barrier_top);
  const double e_max = zero + scales.to_ej(e_max_ghz);
  if (e_max < top) {
    throw ConfigError("grid e_max must lie above the barrier top");
  }
  const double level = e_max + padding * wells.delta_u_right;
  Grid grid;
  grid.gamma_min = edge_at_level(profile, wells.gamma_left_min, level, -1.0);
  grid.gamma_max = edge_at_level(profile, wells.gamma_right_min, level, +1.0);
  grid.n_points = n_points;
  check_resolution(grid, scales.lambda,
                   e_max - profile.value(wells.gamma_right_min));
  return grid;
}

Grid build_sweep_grid(const DerivedScales& scales, double j_start,
                      double j_end, double margin_ghz, std::size_t n_points,
                      double padding) {
  constexpr int kSamples = 8;
  Grid grid;
  grid.gamma_min = std::numeric_limits<double>::infinity();
  grid.gamma_max = -std::numeric_limits<double>::infinity();
  grid.n_points = n_points;
  std::vector<double> kinetic;
  for (int s = 0; s <= kSamples; ++s) {
    const double j = j_start + (j_end - j_start) * s / kSamples;
    const PotentialProfile profile(j, scales.beta);
    const WellSet wells = find_wells(profile);
    const double e_max = scales.to_ghz(wells.delta_u_left) + margin_ghz;
    const Grid local =
        build_grid(profile, wells, scales, e_max, n_points, padding);
    grid.gamma_min = std::min(grid.gamma_min, local.gamma_min);
    grid.gamma_max = std::max(grid.gamma_max, local.gamma_max);
    kinetic.push_back(scales.to_ej(e_max) + wells.delta_u_right -
                      wells.delta_u_left);
  }
  for (double k : kinetic) check_resolution(grid, scales.lambda, k);
  return grid;
}

std::vector<double> kinetic_row(const Grid& grid, double lambda) {
  const std::size_t n = grid.n_points;
  const double dk = 2.0 * constants::pi / (static_cast<double>(n) * grid.spacing());
  std::vector<double> cos_table(n);
  for (std::size_t m = 0; m < n; ++m) {
    cos_table[m] = std::cos(2.0 * constants::pi * static_cast<double>(m) /
                            static_cast<double>(n));
  }
  const std::size_t half = n / 2;
  std::vector<double> row(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    double sum = 0.0;
    for (std::size_t l = 1; l < half; ++l) {
      const double k = dk * static_cast<double>(l);
      sum += 2.0 * k * k * cos_table[(l * d) % n];
    }
    const double k_nyq = dk * static_cast<double>(half);
    sum += k_nyq * k_nyq * (d % 2 == 0 ? 1.0 : -1.0);
    row[d] = lambda * sum / static_cast<double>(n);
  }
  return row;
}

linalg::SymmetricMatrix build_hamiltonian(
    const Grid& grid, double lambda,
    const std::function<double(double)>& potential) {
  const std::size_t n = grid.n_points;
  const std::vector<double> row = kinetic_row(grid, lambda);
  linalg::SymmetricMatrix h(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      h(i, j) = row[i > j ? i - j : j - i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) h(i, i) += potential(grid.node(i));
  return h;
}

linalg::SymmetricMatrix build_hamiltonian(const Grid& grid,
                                          const PotentialProfile& profile,
                                          const DerivedScales& scales) {
  return build_hamiltonian(grid, scales.lambda,
                           [&](double g) { return profile.value(g); });
}

HamiltonianFamily::HamiltonianFamily(const Grid& grid,
                                     const DerivedScales& scales)
    : grid_(grid) {
  const PotentialProfile unbiased(0.0, scales.beta);
  base_ = build_hamiltonian(grid, unbiased, scales);
}

linalg::SymmetricMatrix HamiltonianFamily::at(double bias_j) const {
  linalg::SymmetricMatrix h = base_;
  for (std::size_t i = 0; i < grid_.n_points; ++i) {
    h(i, i) -= bias_j * grid_.node(i);
  }
  return h;
}

std::span<const double> SpectralSolution::eigenvector(std::size_t i) const {
  const std::size_t n = grid.n_points;
  return std::span<const double>(eigenvectors).subspan(i * n, n);
}

std::string branch_label(int branch) {
  if (branch >= 0) return "H" + std::to_string(branch);
  return branch == kRightBranch ? "V" : "D";
}

std::string SpectralSolution::label(std::size_t i) const {
  if (i >= branch.size()) return "?";
  return branch_label(branch[i]);
}

double SpectralSolution::mean_gamma(std::size_t i) const {
  const auto psi = eigenvector(i);
  const double dx = grid.spacing();
  double m = 0.0;
  for (std::size_t p = 0; p < psi.size(); ++p) {
    m += grid.node(p) * psi[p] * psi[p] * dx;
  }
  return m;
}

double SpectralSolution::max_edge_amplitude() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < count() && has_vectors(); ++i) {
    const auto psi = eigenvector(i);
    worst = std::max({worst, std::fabs(psi.front()), std::fabs(psi.back())});
  }
  return worst;
}

SpectralSolution eigensolve(linalg::SymmetricMatrix h, const Grid& grid,
                            const DerivedScales& scales, double bias_j,
                            double zero_level_ej, const EigenRequest& request) {
  const std::size_t n = grid.n_points;
  if (h.size() != n) throw std::invalid_argument("Hamiltonian/grid size mismatch");
  const linalg::TridiagonalEigen tri(std::move(h));

  SpectralSolution sol;
  sol.bias_j = bias_j;
  sol.grid = grid;
  sol.zero_level_ej = zero_level_ej;
  sol.n_right_below_zero = tri.count_below(zero_level_ej);
  const std::size_t first =
      request.lower_ghz
          ? tri.count_below(zero_level_ej + scales.to_ej(*request.lower_ghz))
          : 0;
  const std::size_t end = std::min(
      n, tri.count_below(zero_level_ej + scales.to_ej(request.upper_ghz)) +
             request.extra_above);
  sol.first_index = first;
  if (end <= first) return sol;

  linalg::EigenBlock block = tri.solve(first, end - 1, request.vectors);
  sol.eigenvalues.resize(block.values.size());
  for (std::size_t i = 0; i < block.values.size(); ++i) {
    sol.eigenvalues[i] = scales.to_ghz(block.values[i] - zero_level_ej);
  }
  if (request.vectors) {
    const double scale = 1.0 / std::sqrt(grid.spacing());
    for (std::size_t c = 0; c < block.values.size(); ++c) {
      double* col = block.vectors.data() + c * n;
      std::size_t peak = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (std::fabs(col[i]) > std::fabs(col[peak])) peak = i;
      }
      const double sign = col[peak] < 0.0 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < n; ++i) col[i] *= sign * scale;
    }
    sol.eigenvectors = std::move(block.vectors);
  }
  return sol;
}

void classify_localization(SpectralSolution& sol, const WellSet& wells) {
  if (!sol.has_vectors()) {
    throw std::invalid_argument("classify_localization needs eigenvectors");
  }
  const std::size_t n = sol.grid.n_points;
  const double dx = sol.grid.spacing();
  const std::size_t m = sol.count();
  sol.p_left.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const auto psi = sol.eigenvector(k);
    double p = 0.0;
    for (std::size_t i = 0; i < n && sol.grid.node(i) < wells.gamma_barrier_top;
         ++i) {
      p += psi[i] * psi[i];
    }
    sol.p_left[k] = std::clamp(p * dx, 0.0, 1.0);
  }

  // Near-degenerate pairs: ascending energy, then ascending p_left.
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (sol.eigenvalues[k + 1] - sol.eigenvalues[k] < 1e-9 &&
        sol.p_left[k] > sol.p_left[k + 1]) {
      std::swap(sol.eigenvalues[k], sol.eigenvalues[k + 1]);
      std::swap(sol.p_left[k], sol.p_left[k + 1]);
      std::swap_ranges(sol.eigenvectors.begin() + k * n,
                       sol.eigenvectors.begin() + (k + 1) * n,
                       sol.eigenvectors.begin() + (k + 1) * n);
    }
  }

  sol.branch.assign(m, kRightBranch);
  double below = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (sol.eigenvalues[k] >= sol.barrier_top_ghz) {
      sol.branch[k] = kAboveBarrier;
    } else if (sol.p_left[k] > 0.5) {
      sol.branch[k] = static_cast<int>(std::floor(below + 0.5));
    }
    below += sol.p_left[k];
  }
}

SpectralSolution solve_spectrum(const DerivedScales& scales, double bias_j,
                                std::size_t n_points, std::size_t extra_above,
                                double padding) {
  const PotentialProfile profile(bias_j, scales.beta);
  const WellSet wells = find_wells(profile);
  const double top_ghz = scales.to_ghz(wells.delta_u_left);
  // Ten states above the top stay well inside a dozen right-well quanta.
  const double quantum_r =
      scales.to_ghz(well_quantum_ej(scales, profile, wells.gamma_right_min));
  const double e_max =
      top_ghz + quantum_r * (1.2 * static_cast<double>(extra_above) + 2.0);
  const Grid grid = build_grid(profile, wells, scales, e_max, n_points, padding);
  EigenRequest request;
  request.upper_ghz = top_ghz;
  request.extra_above = extra_above;
  SpectralSolution sol =
      eigensolve(build_hamiltonian(grid, profile, scales), grid, scales, bias_j,
                 profile.value(wells.gamma_left_min), request);
  sol.barrier_top_ghz = top_ghz;
  classify_localization(sol, wells);
  return sol;
}

}  // namespace mrt
