#include "penning/tools/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "penning/ising_coupling.hpp"
#include "penning/normal_modes.hpp"
#include "penning/odf_calibration.hpp"
#include "penning/serialization.hpp"
#include "penning/spin_dynamics.hpp"
#include "penning/units.hpp"

namespace penning::tools {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

class Writer {
 public:
  Writer(const ScenarioConfig& config, const RunOptions& run, std::string command)
      : dir_(run.output_directory.empty() ? config.output_directory : run.output_directory),
        provenance_(provenance_json(config, command)) {
    fs::create_directories(dir_);
  }

  void csv(const std::string& name, const std::string& body) {
    write(name, "# " + provenance_ + "\n" + body);
  }

  void json(const std::string& name, ojson doc) {
    doc["provenance"] = ojson::parse(provenance_);
    write(name, doc.dump(2) + "\n");
  }

  std::vector<fs::path> files;

 private:
  void write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write " + path.string());
    out << text;
    if (!out) throw Error("io", "write failed for " + path.string());
    files.push_back(path);
  }

  fs::path dir_;
  std::string provenance_;
};

// Non-finite values have no JSON spelling; report them as null.
ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

double to_hz(double omega) { return omega / constants::two_pi; }

// Configured detunings are echoed without the last-bit noise of the rad/s -> Hz conversion.
double detuning_hz(double omega) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", to_hz(omega));
  return std::strtod(buf, nullptr);
}

IonCrystal obtain_crystal(const ScenarioConfig& config) {
  if (config.crystal_file) {
    std::ifstream in(*config.crystal_file, std::ios::binary);
    if (!in) throw ParseError("cannot open crystal file " + config.crystal_file->string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return crystal_from_json(buffer.str());
  }
  MinimizerOptions opts;
  opts.max_iterations = config.max_iterations;
  return equilibrium_crystal(config.ions, config.trap, opts);
}

std::string summary(ojson j) { return j.dump(); }

}  // namespace

std::vector<double> default_sweep_detunings() {
  std::vector<double> out;
  for (double f : {1.0, 2.0, 4.0, 7.0, 10.0, 20.0, 40.0, 70.0, 100.0}) out.push_back(khz(f));
  return out;
}

CommandOutput cmd_crystal(const ScenarioConfig& config, const RunOptions& run) {
  const IonCrystal crystal = obtain_crystal(config);
  Writer w(config, run, "crystal");
  w.json("crystal.json", ojson::parse(crystal_to_json(crystal)));
  w.csv("crystal.csv", crystal_to_csv(crystal));

  ojson s{{"command", "crystal"}, {"ions", crystal.size()}};
  s["d0_m"] = crystal.size() > 1 ? number(nearest_neighbor_spacing(crystal)) : ojson(nullptr);
  s["radius_m"] = number(crystal_radius(crystal));
  s["energy_J"] = number(crystal.potential_energy);
  s["gradient_norm_N"] = number(crystal.gradient_norm);
  s["iterations"] = crystal.iterations;
  return {w.files, summary(s), {}};
}

CommandOutput cmd_modes(const ScenarioConfig& config, const RunOptions& run) {
  const IonCrystal crystal = obtain_crystal(config);
  const ModeSpectrum spectrum = transverse_modes(crystal);
  Writer w(config, run, "modes");
  w.csv("modes.csv", modes_to_csv(spectrum));
  w.json("mode_vectors.json", ojson::parse(mode_vectors_to_json(spectrum, config.top_modes)));

  const auto n = spectrum.size();
  ojson s{{"command", "modes"},
          {"modes", n},
          {"com_Hz", to_hz(spectrum.frequencies(0))},
          {"lowest_Hz", to_hz(spectrum.frequencies(n - 1))}};
  return {w.files, summary(s), {}};
}

CommandOutput cmd_couplings(const ScenarioConfig& config, const RunOptions& run) {
  const IonCrystal crystal = obtain_crystal(config);
  const ModeSpectrum spectrum = transverse_modes(crystal);
  const double omega_1 = spectrum.frequencies(0);
  const ODFDrive drive = make_drive(omega_1 + config.detuning, config.intensity, config.beam);
  const CouplingMatrix c = coupling_matrix(spectrum, drive, config.resonance_guard);

  Writer w(config, run, "couplings");
  w.csv("pairs.csv", pairs_to_csv(c.J, crystal));

  const double n = static_cast<double>(crystal.size());
  const double jbar = crystal.size() > 1 ? mean_coupling(c.J) : 0.0;
  ojson s{{"command", "couplings"},
          {"detuning_Hz", detuning_hz(config.detuning)},
          {"force_N", drive.force},
          {"mean_coupling_rad_s", jbar},
          {"Jbar_per_IR2_over_2pi", to_hz(jbar) / (config.intensity * config.intensity)},
          {"chi_rad_s", uniform_limit_chi(drive, omega_1, spectrum.ion_mass, config.resonance_guard)}};
  std::vector<std::string> warnings;
  try {
    const PowerLawFit fit = power_law_fit(c.J, crystal);
    w.json("fit.json", ojson::parse(fit_to_json(fit)));
    s["exponent_a"] = fit.exponent;
    s["prefactor_over_2piN_Hz"] = fit.sign * to_hz(fit.prefactor) / n;
  } catch (const FitError& e) {
    w.json("fit.json", ojson{{"error", e.kind()}, {"message", e.what()}});
    s["exponent_a"] = nullptr;
    warnings.push_back(std::string("no power-law fit: ") + e.what());
  } catch (const ArityError& e) {
    warnings.push_back(std::string("no power-law fit: ") + e.what());
  }
  return {w.files, summary(s), warnings};
}

CommandOutput cmd_sweep(const ScenarioConfig& config, const RunOptions& run) {
  const IonCrystal crystal = obtain_crystal(config);
  const ModeSpectrum spectrum = transverse_modes(crystal);
  const auto detunings =
      config.sweep_detunings.empty() ? default_sweep_detunings() : config.sweep_detunings;
  const ODFDrive tmpl = make_drive(spectrum.frequencies(0), config.intensity, config.beam);
  const auto rows =
      detuning_sweep(spectrum, crystal, tmpl, detunings, run.threads, config.resonance_guard);

  Writer w(config, run, "sweep");
  w.csv("sweep.csv", sweep_to_csv(rows));
  if (config.write_pairs) {
    for (const auto& row : rows) {
      ODFDrive drive = tmpl;
      drive.beat_frequency = spectrum.frequencies(0) + row.detuning;
      const auto c = coupling_matrix(spectrum, drive, config.resonance_guard);
      char name[64];
      std::snprintf(name, sizeof name, "pairs_%.12gHz.csv", detuning_hz(row.detuning));
      w.csv(name, pairs_to_csv(c.J, crystal));
    }
  }

  bool jbar_falls = true, a_rises = true;
  int fitted = 0;
  std::optional<double> last_a;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].mean_coupling < rows[i - 1].mean_coupling)) jbar_falls = false;
    if (rows[i].fit) {
      if (last_a && rows[i].fit->exponent < *last_a) a_rises = false;
      last_a = rows[i].fit->exponent;
      ++fitted;
    }
  }
  ojson s{{"command", "sweep"},
          {"rows", rows.size()},
          {"fitted_rows", fitted},
          {"mean_coupling_decreasing", jbar_falls},
          {"exponent_non_decreasing", a_rises}};
  return {w.files, summary(s), {}};
}

CommandOutput cmd_precess(const ScenarioConfig& config, const RunOptions& run) {
  const int n = config.spins;
  const double chi = config.sequence_chi();
  const double tau = config.tau_arm;
  SequenceParams p;
  p.tau_arm = tau;
  p.mean_coupling = config.mean_coupling.value_or(chi * (n - 1) / n);
  p.decoherence = config.decoherence;
  p.chi = chi;
  p.spins = n;
  p.validate();
  const bool with_oracle = n <= kBruteForceMaxSpins;
  const double envelope = std::exp(-config.decoherence * 2.0 * tau);

  std::ostringstream csv;
  csv << "theta1_rad,P_up_MF,Jz_MF_normalized,Jz_exact_normalized";
  if (with_oracle) csv << ",Jz_oracle_normalized";
  csv << '\n';
  double max_gap = 0.0;
  const int points = config.theta_points;
  for (int k = 0; k < points; ++k) {
    const double theta =
        config.theta_min + (config.theta_max - config.theta_min) * k / static_cast<double>(points - 1);
    p.theta_1 = theta;
    const double p_mf = mf_precession_probability(p);
    const double mf_norm = 2.0 * p_mf - 1.0;
    const double exact = 2.0 * exact_sequence_jz(n, chi, tau, theta, config.decoherence) / n;
    max_gap = std::max(max_gap, std::abs(exact - mf_norm));
    csv << format_double(theta) << ',' << format_double(p_mf) << ',' << format_double(mf_norm) << ','
        << format_double(exact);
    if (with_oracle) {
      csv << ',' << format_double(envelope * 2.0 * brute_force_sequence(n, chi, tau, theta).jz / n);
    }
    csv << '\n';
  }

  Writer w(config, run, "precess");
  w.csv("precession.csv", csv.str());

  const double bound = mf_validity_bound(n, chi, 2.0 * tau);
  std::vector<std::string> warnings;
  if (bound > 0.5) {
    warnings.push_back("chi t / (sqrt(N)/4) = " + format_double(bound) +
                       " exceeds 0.5; the mean-field formula is not reliable here");
  }
  ojson s{{"command", "precess"},
          {"spins", n},
          {"chi_rad_s", chi},
          {"chi_t", chi * 2.0 * tau},
          {"mean_coupling_rad_s", p.mean_coupling},
          {"max_abs_gap", max_gap},
          {"mf_validity_bound", bound}};
  return {w.files, summary(s), warnings};
}

CommandOutput cmd_calibrate(const ScenarioConfig& config, const RunOptions& run) {
  const IonCrystal crystal = obtain_crystal(config);
  const ModeSpectrum spectrum = transverse_modes(crystal);
  const BeamGeometry& g = config.beam;
  const ODFDrive drive = make_drive(spectrum.frequencies(0) + config.detuning, config.intensity, g);
  const auto z = z_rms_profile(spectrum, config.temperature);

  const Point cc = center_of_charge(crystal.positions);
  std::size_t centre = 0, edge = 0;
  double rmin = std::numeric_limits<double>::infinity(), rmax = -1.0;
  for (std::size_t i = 0; i < crystal.size(); ++i) {
    const double r = std::hypot(crystal.positions[i].x - cc.x, crystal.positions[i].y - cc.y);
    if (r < rmin) rmin = r, centre = i;
    if (r > rmax) rmax = r, edge = i;
  }
  const auto motion =
      spin_motion_criterion(spectrum, drive, config.temperature, config.composite_sqrt_n);

  ojson margins = ojson::array();
  for (double m : motion.margins) margins.push_back(number(m));
  ojson doc{
      {"ions", crystal.size()},
      {"delta_k_per_m", delta_k(g)},
      {"lambda_R_m", lattice_wavelength(g)},
      {"F0_N", drive.force},
      {"Gamma_per_s", gamma_from_intensity(config.intensity)},
      {"temperature_K", config.temperature},
      {"z_rms_center_m", z[centre]},
      {"z_rms_edge_m", z[edge]},
      {"eta_center", lamb_dicke_parameter(z[centre], g)},
      {"eta_edge", lamb_dicke_parameter(z[edge], g)},
      {"tilt_index", tilt_modulation_index(g, config.array_radius)},
      {"spin_motion",
       {{"min_margin", number(motion.min_margin)},
        {"worst_mode", motion.worst_mode},
        {"satisfied", motion.satisfied},
        {"force_free", motion.force_free},
        {"composite_sqrt_n", config.composite_sqrt_n},
        {"margins", margins}}},
  };
  Writer w(config, run, "calibrate");
  w.json("calibration.json", doc);

  std::vector<std::string> warnings;
  if (!motion.satisfied) {
    warnings.push_back("spin-motion margin " + format_double(motion.min_margin) + " below 1 (mode " +
                       std::to_string(motion.worst_mode) + ")");
  }
  doc.erase("spin_motion");
  doc["command"] = "calibrate";
  doc["min_spin_motion_margin"] = number(motion.min_margin);
  return {w.files, summary(doc), warnings};
}

std::string error_json(const std::exception& e) {
  ojson j;
  if (const auto* pe = dynamic_cast<const Error*>(&e)) {
    j["error"] = pe->kind();
  } else {
    j["error"] = "internal";
  }
  j["message"] = e.what();
  if (const auto* ie = dynamic_cast<const InstabilityError*>(&e)) j["unstable_modes"] = ie->unstable_modes();
  if (const auto* re = dynamic_cast<const ResonanceError*>(&e)) j["mode"] = re->mode();
  if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
    j["iterations"] = ce->best().iterations;
    j["gradient_norm_N"] = ce->best().gradient_norm;
  }
  return j.dump();
}

}  // namespace penning::tools
