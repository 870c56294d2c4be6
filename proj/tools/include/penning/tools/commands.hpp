#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "penning/tools/scenario.hpp"

namespace penning::tools {

struct RunOptions {
  std::filesystem::path output_directory;
  int threads = 1;
};

struct CommandOutput {
  std::vector<std::filesystem::path> files;
  std::string summary;                // one-line JSON for stdout
  std::vector<std::string> warnings;  // for stderr
};

// Every file written starts with a `#` JSON provenance line (CSV) or carries
// a "provenance" member (JSON).

/// crystal.json, crystal.csv
CommandOutput cmd_crystal(const ScenarioConfig& config, const RunOptions& run);
/// modes.csv, mode_vectors.json (top `top_modes` modes)
CommandOutput cmd_modes(const ScenarioConfig& config, const RunOptions& run);
/// pairs.csv, fit.json at the configured detuning and intensity
CommandOutput cmd_couplings(const ScenarioConfig& config, const RunOptions& run);
/// sweep.csv, plus pairs_<detuning>Hz.csv per row when write_pairs is set
CommandOutput cmd_sweep(const ScenarioConfig& config, const RunOptions& run);
/// precession.csv over the theta_1 grid
CommandOutput cmd_precess(const ScenarioConfig& config, const RunOptions& run);
/// calibration.json
CommandOutput cmd_calibrate(const ScenarioConfig& config, const RunOptions& run);

/// Detunings used by `sweep` when the config gives none, rad/s.
std::vector<double> default_sweep_detunings();

/// {"error": kind, "message": ..., ...} for a failed command.
std::string error_json(const std::exception& e);

}  // namespace penning::tools
