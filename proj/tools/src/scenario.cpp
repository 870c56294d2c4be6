#include "penning/tools/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "penning/units.hpp"
#include "penning/version.hpp"

namespace penning::tools {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view v) {
  const double x = parse_quantity(v, Dimension::dimensionless);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ParseError("expected an integer, got '" + std::string(v) + "'");
  }
  return static_cast<int>(x);
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError("expected true or false, got '" + std::string(v) + "'");
}

// Rates may be given as ordinary frequencies (Hz, kHz: multiplied by 2 pi)
// or directly in rad_per_s / per_s.
double parse_rate(std::string_view v) {
  try {
    return parse_quantity(v, Dimension::frequency);
  } catch (const ParseError&) {
    return parse_quantity(v, Dimension::angular_rate);
  }
}

std::vector<double> parse_list(std::string_view v, Dimension dim) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (item.empty()) throw ParseError("empty list entry");
    out.push_back(parse_quantity(item, dim));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"trap.magnetic_field",
       [](auto& c, auto v) { c.trap.magnetic_field = parse_quantity(v, Dimension::magnetic_field); }},
      {"trap.axial_frequency",
       [](auto& c, auto v) { c.trap.axial_frequency = parse_quantity(v, Dimension::frequency); }},
      {"trap.rotation_frequency",
       [](auto& c, auto v) { c.trap.rotation_frequency = parse_quantity(v, Dimension::frequency); }},
      {"trap.wall_strength",
       [](auto& c, auto v) { c.trap.wall_strength = parse_quantity(v, Dimension::dimensionless); }},
      {"trap.ion_mass", [](auto& c, auto v) { c.trap.ion_mass = parse_quantity(v, Dimension::mass); }},
      {"trap.charge_number",
       [](auto& c, auto v) { c.trap.ion_charge = parse_int(v) * constants::elementary_charge; }},

      {"crystal.ions", [](auto& c, auto v) { c.ions = parse_int(v); }},
      {"crystal.shells", [](auto& c, auto v) { c.ions = closed_shell_count(parse_int(v)); }},
      {"crystal.file", [](auto& c, auto v) { c.crystal_file = std::filesystem::path(v); }},
      {"crystal.max_iterations", [](auto& c, auto v) { c.max_iterations = parse_int(v); }},

      {"beam.wavelength", [](auto& c, auto v) { c.beam.wavelength = parse_quantity(v, Dimension::length); }},
      {"beam.angle", [](auto& c, auto v) { c.beam.beam_angle = parse_quantity(v, Dimension::angle); }},
      {"beam.misalignment",
       [](auto& c, auto v) { c.beam.misalignment = parse_quantity(v, Dimension::angle); }},
      {"beam.polarization",
       [](auto& c, auto v) {
         const double phi = parse_quantity(v, Dimension::angle);
         c.beam.polarization_upper = phi;
         c.beam.polarization_lower = -phi;
       }},

      {"drive.detuning", [](auto& c, auto v) { c.detuning = parse_quantity(v, Dimension::frequency); }},
      {"drive.intensity", [](auto& c, auto v) { c.intensity = parse_quantity(v, Dimension::intensity); }},
      {"drive.resonance_guard",
       [](auto& c, auto v) { c.resonance_guard = parse_quantity(v, Dimension::frequency); }},
      {"drive.sweep",
       [](auto& c, auto v) { c.sweep_detunings = parse_list(v, Dimension::frequency); }},
      {"drive.write_pairs", [](auto& c, auto v) { c.write_pairs = parse_bool(v); }},

      {"sequence.spins", [](auto& c, auto v) { c.spins = parse_int(v); }},
      {"sequence.tau_arm", [](auto& c, auto v) { c.tau_arm = parse_quantity(v, Dimension::time); }},
      {"sequence.chi", [](auto& c, auto v) { c.chi = parse_rate(v); }},
      {"sequence.chi_t", [](auto& c, auto v) { c.chi_t = parse_quantity(v, Dimension::dimensionless); }},
      {"sequence.mean_coupling", [](auto& c, auto v) { c.mean_coupling = parse_rate(v); }},
      {"sequence.decoherence",
       [](auto& c, auto v) { c.decoherence = parse_quantity(v, Dimension::angular_rate); }},
      {"sequence.theta_min", [](auto& c, auto v) { c.theta_min = parse_quantity(v, Dimension::angle); }},
      {"sequence.theta_max", [](auto& c, auto v) { c.theta_max = parse_quantity(v, Dimension::angle); }},
      {"sequence.theta_points", [](auto& c, auto v) { c.theta_points = parse_int(v); }},

      {"calibration.temperature",
       [](auto& c, auto v) { c.temperature = parse_quantity(v, Dimension::temperature); }},
      {"calibration.array_radius",
       [](auto& c, auto v) { c.array_radius = parse_quantity(v, Dimension::length); }},
      {"calibration.composite_sqrt_n", [](auto& c, auto v) { c.composite_sqrt_n = parse_bool(v); }},

      {"output.directory", [](auto& c, auto v) { c.output_directory = std::filesystem::path(v); }},
      {"output.top_modes", [](auto& c, auto v) { c.top_modes = parse_int(v); }},
  };
  return table;
}

}  // namespace

double ScenarioConfig::sequence_chi() const {
  if (chi) return *chi;
  if (chi_t) {
    if (!(tau_arm > 0)) throw ConfigurationError("chi_t needs a positive tau_arm");
    return *chi_t / (2.0 * tau_arm);
  }
  throw ConfigurationError("[sequence] needs chi or chi_t");
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig config;
  std::map<std::string, std::string> seen;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string> known = {"trap", "crystal", "beam", "drive",
                                                     "sequence", "calibration", "output"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        throw ParseError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + "expected key = value");
    if (section.empty()) throw ParseError(where + "key outside of any section");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(where + "unknown key '" + key + "'");
    if (seen.contains(key)) throw ParseError(where + "duplicate key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const Error& e) {
      throw ParseError(where + key + ": " + e.what());
    }
    seen.emplace(key, std::string(value));
  }

  if (seen.contains("crystal.ions") && seen.contains("crystal.shells")) {
    throw ParseError("[crystal] takes ions or shells, not both");
  }
  if (config.chi && config.chi_t) throw ParseError("[sequence] takes chi or chi_t, not both");
  if (config.ions < 1) throw ParseError("[crystal] ions must be positive");
  if (config.spins < 1) throw ParseError("[sequence] spins must be positive");
  if (config.theta_points < 2) throw ParseError("[sequence] theta_points must be at least 2");
  if (config.top_modes < 0) throw ParseError("[output] top_modes must be non-negative");

  for (const auto& [k, v] : seen) config.canonical += k + " = " + v + "\n";
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError("cannot open config file " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto config = parse_scenario(buffer.str());
  if (config.crystal_file && config.crystal_file->is_relative()) {
    config.crystal_file = file.parent_path() / *config.crystal_file;
  }
  return config;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string provenance_json(const ScenarioConfig& config, std::string_view command) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.canonical)));
  nlohmann::ordered_json j{
      {"command", command},
      {"config_hash", std::string("fnv1a:") + hash},
      {"version", kVersion},
  };
  return j.dump();
}

}  // namespace penning::tools
