#pragma once

#include <exception>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrt/config.hpp"

namespace mrt::cli {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kConfig = 2,
  kRegime = 3,
  kConvergence = 4,
  kIo = 5,
};

/// Maps the library's exception hierarchy onto exit codes.
int exit_code_for(const std::exception& e);

struct RunResult {
  std::vector<std::string> files;  // relative to the output directory
  std::string summary;             // one line
  nlohmann::json grid;             // grid settings actually used
  nlohmann::json skipped;          // crossing brackets that failed refinement
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {
      "potential", "spectrum", "crossings", "wkb",
      "deepsweep", "transitions", "observability"};
  return names;
}

/// Runs one subcommand and writes its tables plus <command>.manifest.json.
RunResult run_command(const std::string& command, const RunConfig& config);

/// Manifest contents: canonical config and its hash, constants, derived
/// scales, grid, output hashes and the BLAS kernel. No timestamps, so two
/// identical runs produce identical manifests.
nlohmann::json manifest(const std::string& command, const RunConfig& config,
                        const RunResult& result);

/// Full command line: parses flags, runs, prints the summary line.
int cli_dispatch(int argc, char** argv);

}  // namespace mrt::cli
