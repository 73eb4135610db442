#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mrt/bias_sweep.hpp"
#include "mrt/circuit_model.hpp"
#include "mrt/tables.hpp"

namespace mrt {

/// A single bias given either directly or as a target left-well state count.
struct BiasSpec {
  std::optional<double> j;
  std::optional<double> n_l;

  double resolve(const DerivedScales& scales) const;
};

struct SweepSection {
  std::optional<double> j_start, j_end;
  std::optional<double> n_l_max, n_l_min;  // n_l_max maps to the lower J
  std::size_t n_coarse = 400;
  double refine_tolerance_j = 1e-9;
  int max_branch = 5;
  double window_quanta = 2.0;
  int max_subdivision = 8;
};

struct PotentialSection {
  std::optional<double> gamma_min, gamma_max;  // default: around the wells
  std::size_t samples = 801;
};

struct WkbSection {
  std::vector<int> n_l_values = {0, 1, 2};
  std::vector<double> n_big_l_values = {2.0, 3.0, 4.0, 5.0};
};

struct DeepSweepSection {
  double critical_current = 10e-6;
  double beta = 4.5;
  double n_big_l = 3.0;
  double ec_over_ej_min = 1e-6;
  double ec_over_ej_max = 1e-2;
  std::size_t count = 41;
};

struct TransitionSection {
  std::vector<std::pair<int, int>> pairs = {{0, 1}, {1, 2}};
  TransitionOptions options;
};

struct RunConfig {
  std::optional<CircuitParams> circuit;
  BiasSpec bias;
  SweepSection sweep;
  std::size_t n_points = kDefaultGridPoints;
  double padding = kDefaultPadding;
  std::size_t extra_above = 10;
  PotentialSection potential;
  WkbSection wkb;
  DeepSweepSection deepsweep;
  TransitionSection transitions;
  std::filesystem::path output_directory = "out";
  io::Format format = io::Format::csv;
  unsigned threads = 1;

  /// Throws ConfigError when no circuit section was given.
  const CircuitParams& require_circuit() const;
};

/// Strict parse: unknown keys, wrong types and non-physical values all raise
/// ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Every effective setting, defaults included, in a stable key order.
nlohmann::json canonical_json(const RunConfig& config);

/// Sweep settings with the window resolved to J and validated.
SweepConfig sweep_config(const RunConfig& config, const DerivedScales& scales);

}  // namespace mrt
