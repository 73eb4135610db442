#include "mrt/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "mrt/bias_sweep.hpp"
#include "mrt/constants.hpp"
#include "mrt/errors.hpp"
#include "mrt/linalg.hpp"
#include "mrt/observability.hpp"
#include "mrt/spectral_solver.hpp"
#include "mrt/tables.hpp"
#include "mrt/wkb.hpp"

namespace mrt::cli {

namespace {

using nlohmann::json;

std::string fmt(double x, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

json grid_json(const Grid& g, double padding) {
  return {{"n_points", g.n_points},
          {"gamma_min", g.gamma_min},
          {"gamma_max", g.gamma_max},
          {"spacing", g.spacing()},
          {"padding_fraction", padding}};
}

void emit(RunResult& r, const io::Table& t, const RunConfig& c,
          const std::string& stem) {
  const auto files = io::write_table(t, c.output_directory, stem, c.format);
  r.files.insert(r.files.end(), files.begin(), files.end());
}

RunResult run_potential(const RunConfig& c) {
  const DerivedScales scales = derive_scales(c.require_circuit());
  const double j = c.bias.resolve(scales);
  const PotentialProfile profile(j, scales.beta);
  const WellSet wells = find_wells(profile);
  const double lo =
      c.potential.gamma_min.value_or(wells.gamma_left_min - constants::pi);
  const double hi =
      c.potential.gamma_max.value_or(wells.gamma_right_min + constants::pi);
  RunResult r;
  emit(r, io::potential_table(profile, wells, scales, lo, hi, c.potential.samples),
       c, "potential");
  r.grid = {{"gamma_min", lo}, {"gamma_max", hi}, {"samples", c.potential.samples}};
  r.summary = "J = " + fmt(j, 9) + ", beta = " + fmt(scales.beta) +
              ", barrier above left well " +
              fmt(scales.to_ghz(wells.delta_u_left)) + " GHz, above right well " +
              fmt(scales.to_ghz(wells.delta_u_right)) + " GHz";
  return r;
}

RunResult run_spectrum(const RunConfig& c) {
  const DerivedScales scales = derive_scales(c.require_circuit());
  RunResult r;
  std::vector<BiasSample> samples;
  io::BiasAxis axis{scales.critical_current, 0.0};
  if (c.sweep.j_start || c.sweep.n_l_max) {
    const SweepConfig sc = sweep_config(c, scales);
    const SweepContext context(scales, sc);
    samples = run_sweep(context).samples;
    axis.j_origin = sc.j_start;
    r.grid = grid_json(context.grid(), sc.padding);
  } else {
    const double j = c.bias.resolve(scales);
    const SpectralSolution sol =
        solve_spectrum(scales, j, c.n_points, c.extra_above, c.padding);
    samples.push_back(make_sample(
        sol, find_wells(PotentialProfile(j, scales.beta)).gamma_left_min));
    axis.j_origin = j;
    r.grid = grid_json(sol.grid, c.padding);
  }
  emit(r, io::spectrum_table(samples, scales, axis), c, "spectrum");
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = 0;
  for (const auto& s : samples) {
    lo = std::min(lo, s.n_right_below_zero);
    hi = std::max(hi, s.n_right_below_zero);
  }
  r.summary = std::to_string(samples.size()) + " biases in J = [" +
              fmt(samples.front().j, 9) + ", " + fmt(samples.back().j, 9) +
              "], right-well states below the left-well bottom " +
              std::to_string(lo) + ".." + std::to_string(hi);
  return r;
}

std::string catalog_summary(const SplittingCatalog& cat) {
  std::string s = std::to_string(cat.crossings.size()) + " crossings";
  if (!cat.crossings.empty()) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& x : cat.crossings) {
      lo = std::min(lo, x.delta_mhz);
      hi = std::max(hi, x.delta_mhz);
    }
    s += ", delta " + fmt(lo, 4) + ".." + fmt(hi, 4) + " MHz";
  }
  for (const auto& b : cat.branches) {
    if (b.log_slope) s += ", n=" + std::to_string(b.n_l) + " slope " + fmt(*b.log_slope, 4);
  }
  if (!cat.skipped.empty()) s += ", " + std::to_string(cat.skipped.size()) + " brackets skipped";
  return s;
}

json skipped_json(const SplittingCatalog& cat) {
  json out = json::array();
  for (const auto& s : cat.skipped) {
    out.push_back({{"n_L", s.bracket.n_l},
                   {"k_lower", s.bracket.k_lower},
                   {"j_lo", s.bracket.j_lo},
                   {"j_hi", s.bracket.j_hi},
                   {"reason", s.reason}});
  }
  return out;
}

RunResult run_crossings(const RunConfig& c) {
  const DerivedScales scales = derive_scales(c.require_circuit());
  const SweepConfig sc = sweep_config(c, scales);
  const SweepContext context(scales, sc);
  const BranchTable table = run_sweep(context);
  const SplittingCatalog cat = splitting_catalog(context, table);
  RunResult r;
  const io::BiasAxis axis{scales.critical_current, sc.j_start};
  emit(r, io::crossings_table(cat, axis), c, "crossings");
  emit(r, io::branch_table(cat), c, "branches");
  r.grid = grid_json(context.grid(), sc.padding);
  r.skipped = skipped_json(cat);
  r.summary = catalog_summary(cat);
  return r;
}

RunResult run_wkb(const RunConfig& c) {
  const DerivedScales scales = derive_scales(c.require_circuit());
  std::vector<wkb::WkbEstimate> estimates;
  std::vector<double> biases;
  std::size_t skipped = 0;
  for (double n_big_l : c.wkb.n_big_l_values) {
    const double j = bias_for_target_nl(scales, n_big_l);
    for (int n : c.wkb.n_l_values) {
      try {
        estimates.push_back(wkb::wkb_estimate(scales, j, n));
        biases.push_back(j);
      } catch (const DomainError&) {
        ++skipped;  // level above the barrier top at this N_L
      }
    }
  }
  RunResult r;
  emit(r, io::wkb_table(estimates, biases), c, "wkb");
  r.summary = std::to_string(estimates.size()) + " semiclassical estimates";
  if (skipped) r.summary += ", " + std::to_string(skipped) + " levels above the barrier skipped";
  return r;
}

RunResult run_deepsweep(const RunConfig& c) {
  const auto& d = c.deepsweep;
  const auto ratios = wkb::log_spaced(d.ec_over_ej_min, d.ec_over_ej_max, d.count);
  const auto points = wkb::deep_well_sweep(d.critical_current, d.beta, d.n_big_l, ratios);
  RunResult r;
  emit(r, io::deepsweep_table(points), c, "deepsweep");
  double rl_lo = INFINITY, rl_hi = 0.0, worst = 0.0;
  std::size_t invalid = 0;
  for (const auto& p : points) {
    if (!p.valid) {
      ++invalid;
      continue;
    }
    rl_lo = std::min(rl_lo, p.delta_r_ghz / p.delta_l_ghz);
    rl_hi = std::max(rl_hi, p.delta_r_ghz / p.delta_l_ghz);
    for (int n = 0; n < 3; ++n) {
      worst = std::max(worst, p.delta_mhz[n] * 1e-3 / p.min_spacing_ghz[n]);
    }
  }
  r.summary = std::to_string(points.size()) + " points, Delta_R/Delta_L " +
              fmt(rl_lo, 4) + ".." + fmt(rl_hi, 4) + ", max splitting/spacing " +
              fmt(worst, 3);
  if (invalid) r.summary += ", " + std::to_string(invalid) + " outside the regime";
  return r;
}

RunResult run_transitions(const RunConfig& c) {
  const DerivedScales scales = derive_scales(c.require_circuit());
  const SweepConfig sc = sweep_config(c, scales);
  const SweepContext context(scales, sc);
  const BranchTable table = run_sweep(context);
  const SplittingCatalog cat = splitting_catalog(context, table);
  const auto points = transition_curves(context, table, cat, c.transitions.pairs,
                                        c.transitions.options);
  RunResult r;
  const io::BiasAxis axis{scales.critical_current, sc.j_start};
  emit(r, io::transitions_table(points, axis), c, "transitions");
  emit(r, io::crossings_table(cat, axis), c, "crossings");
  r.grid = grid_json(context.grid(), sc.padding);
  r.skipped = skipped_json(cat);
  r.summary = std::to_string(points.size()) + " transition points, " +
              catalog_summary(cat);
  return r;
}

RunResult run_observability(const RunConfig& c) {
  const CircuitParams& params = c.require_circuit();
  const DerivedScales scales = derive_scales(params);
  const double j = c.bias.resolve(scales);
  const SpectralSolution sol =
      solve_spectrum(scales, j, c.n_points, c.extra_above, c.padding);
  const ObservabilityReport rep = observability_report(params, sol, scales, j);
  RunResult r;
  emit(r, io::observability_table(rep, j), c, "observability");
  r.grid = grid_json(sol.grid, c.padding);
  r.summary = "N_R = " + std::to_string(rep.n_r_exact) + " (harmonic " +
              fmt(rep.n_r_harmonic, 4) + "), omega_L T1 = " + fmt(rep.bound, 5) +
              (rep.observable ? ": observable" : ": not observable (N_R > omega_L T1)");
  return r;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kConfig;
  if (dynamic_cast<const RegimeError*>(&e)) return kRegime;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kConvergence;
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  return kOther;
}

RunResult run_command(const std::string& command, const RunConfig& config) {
  RunResult r;
  if (command == "potential") r = run_potential(config);
  else if (command == "spectrum") r = run_spectrum(config);
  else if (command == "crossings") r = run_crossings(config);
  else if (command == "wkb") r = run_wkb(config);
  else if (command == "deepsweep") r = run_deepsweep(config);
  else if (command == "transitions") r = run_transitions(config);
  else if (command == "observability") r = run_observability(config);
  else throw ConfigError("unknown command '" + command + "'");
  const std::string name = command + ".manifest.json";
  io::write_text(config.output_directory / name,
                 manifest(command, config, r).dump(1) + "\n");
  r.files.push_back(name);
  return r;
}

json manifest(const std::string& command, const RunConfig& config,
              const RunResult& result) {
  const json canonical = canonical_json(config);
  json m;
  m["command"] = command;
  m["config"] = canonical;
  m["config_hash_fnv1a64"] = io::fnv1a_hex(canonical.dump());
  m["constants"] = {{"pi", constants::pi},
                    {"elementary_charge_coulombs", constants::elementary_charge},
                    {"planck_joule_seconds", constants::planck},
                    {"hbar_joule_seconds", constants::hbar},
                    {"flux_quantum_webers", constants::flux_quantum}};
  if (config.circuit) {
    const DerivedScales s = derive_scales(*config.circuit);
    m["scales"] = {{"e_c_ghz", s.e_c_ghz},   {"e_j_ghz", s.e_j_ghz},
                   {"beta", s.beta},         {"lambda", s.lambda},
                   {"omega0_rad_per_s", s.omega0},
                   {"j_star", s.j_star},     {"i_star_amperes", s.i_star}};
  }
  m["grid"] = result.grid.is_null() ? json::object() : result.grid;
  if (!result.skipped.is_null()) m["skipped_crossings"] = result.skipped;
  json outputs = json::array();
  for (const auto& f : result.files) {
    outputs.push_back(
        {{"file", f},
         {"fnv1a64", io::fnv1a_hex(io::read_text(config.output_directory / f))}});
  }
  m["outputs"] = outputs;
  m["blas_core"] = linalg::blas_core_name();
  m["compiler"] = __VERSION__;
  return m;
}

int cli_dispatch(int argc, char** argv) {
  CLI::App app{"Spectra and tunnel splittings of a current-biased rf SQUID",
               "mrtspec"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::size_t grid_points = 0;
  unsigned threads = 0;
  std::optional<double> bias_j;
  std::optional<double> bias_n_l;
  app.add_option("--config", config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--grid-points", grid_points, "grid size (even)");
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--format", format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--bias-j", bias_j, "single bias J, overrides the config");
  app.add_option("--n-l", bias_n_l, "single bias as a target N_L");
  const std::map<std::string, std::string> help = {
      {"potential", "u(gamma) at one bias"},
      {"spectrum", "eigenvalues with localization, at one bias or across the window"},
      {"crossings", "refined avoided crossings and per-branch slopes"},
      {"wkb", "semiclassical splittings over N_L and n_L"},
      {"deepsweep", "semiclassical sweep over E_C/E_J at fixed N_L"},
      {"transitions", "transition frequencies with left weights across the window"},
      {"observability", "right-well count against omega_L T1"}};
  for (const auto& name : commands()) app.add_subcommand(name, help.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!out_dir.empty()) config.output_directory = out_dir;
    if (!format.empty()) config.format = io::parse_format(format);
    if (grid_points) {
      if (grid_points < 4 || grid_points % 2 != 0) {
        throw ConfigError("--grid-points must be even and >= 4");
      }
      config.n_points = grid_points;
    }
    if (threads) config.threads = threads;
    if (bias_j && bias_n_l) throw ConfigError("give --bias-j or --n-l, not both");
    if (bias_j || bias_n_l) {
      // A single bias replaces any sweep window for the spectrum command.
      config.bias = BiasSpec{bias_j, bias_n_l};
      config.sweep.j_start = config.sweep.j_end = std::nullopt;
      config.sweep.n_l_max = config.sweep.n_l_min = std::nullopt;
    }
    const RunResult r = run_command(command, config);
    std::cout << "mrtspec " << command << ": " << r.summary << " -> "
              << config.output_directory.string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const char* kind = code == kConfig        ? "config"
                       : code == kRegime      ? "regime"
                       : code == kConvergence ? "convergence"
                       : code == kIo          ? "i/o"
                                              : "internal";
    std::cerr << "mrtspec " << command << ": " << kind << " error: " << e.what()
              << "\n";
    return code;
  }
}

}  // namespace mrt::cli
