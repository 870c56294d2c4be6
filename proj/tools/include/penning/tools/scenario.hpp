#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "penning/odf_calibration.hpp"
#include "penning/trap_crystal.hpp"

namespace penning::tools {

/// Everything a CLI run needs, read from one scenario file.
///
/// File format: `[section]` headers followed by `key = value unit` lines.
/// `#` starts a comment. Dimensional values must carry a unit suffix
/// (kHz, W_per_cm2, deg, uK, ...); lists are comma separated. Unknown
/// sections or keys are rejected.
struct ScenarioConfig {
  TrapConfig trap = TrapConfig::beryllium_default();

  // [crystal]
  int ions = 217;
  std::optional<std::filesystem::path> crystal_file;  // reuse a saved crystal.json
  long max_iterations = 100000;

  // [beam]
  BeamGeometry beam;

  // [drive]
  double detuning = constants::two_pi * 4e3;  // mu_R - omega_1, rad/s
  double intensity = 1.0;                     // W/cm^2
  double resonance_guard = constants::two_pi * 10.0;
  std::vector<double> sweep_detunings;        // rad/s
  bool write_pairs = false;

  // [sequence]
  int spins = 100;
  double tau_arm = 1e-3;                      // s
  std::optional<double> chi;                  // rad/s
  std::optional<double> chi_t;                // chi * 2 tau, dimensionless
  std::optional<double> mean_coupling;        // rad/s, defaults to chi (N - 1) / N
  double decoherence = 0.0;                   // 1/s
  double theta_min = 0.0;
  double theta_max = 2.0 * constants::pi;
  int theta_points = 181;

  // [calibration]
  double temperature = 1e-3;    // K
  double array_radius = 200e-6; // m
  bool composite_sqrt_n = false;

  // [output]
  std::filesystem::path output_directory = "out";
  int top_modes = 14;

  /// Canonical `section.key = value` text of the parsed file, used for hashing.
  std::string canonical;

  /// chi for the exact engine, from `chi` or `chi_t`.
  double sequence_chi() const;
};

/// Parses scenario text. Throws ParseError naming the offending line.
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario(const std::filesystem::path& file);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// `{"config_hash": "...", "version": "...", "command": "..."}` on one line.
std::string provenance_json(const ScenarioConfig& config, std::string_view command);

}  // namespace penning::tools
