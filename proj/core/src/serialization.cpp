#include "penning/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "penning/constants.hpp"

namespace penning {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

json trap_to_json(const TrapConfig& t) {
  return json{
      {"magnetic_field_T", t.magnetic_field},
      {"axial_frequency_rad_s", t.axial_frequency},
      {"rotation_frequency_rad_s", t.rotation_frequency},
      {"wall_strength", t.wall_strength},
      {"ion_mass_kg", t.ion_mass},
      {"ion_charge_C", t.ion_charge},
  };
}

TrapConfig trap_from_json(const json& j) {
  return TrapConfig{
      .magnetic_field = j.at("magnetic_field_T").get<double>(),
      .axial_frequency = j.at("axial_frequency_rad_s").get<double>(),
      .rotation_frequency = j.at("rotation_frequency_rad_s").get<double>(),
      .wall_strength = j.at("wall_strength").get<double>(),
      .ion_mass = j.at("ion_mass_kg").get<double>(),
      .ion_charge = j.at("ion_charge_C").get<double>(),
  };
}

}  // namespace

std::string crystal_to_json(const IonCrystal& crystal) {
  json positions = json::array();
  for (const auto& p : crystal.positions) positions.push_back({p.x, p.y});
  json j{
      {"trap", trap_to_json(crystal.trap)},
      {"positions_m", std::move(positions)},
      {"energy_J", crystal.potential_energy},
      {"gradient_norm_N", crystal.gradient_norm},
      {"tolerance_N", crystal.tolerance},
      {"iterations", crystal.iterations},
  };
  if (crystal.seed) {
    j["seed"] = {{"shells", crystal.seed->shells},
                 {"spacing_m", crystal.seed->spacing},
                 {"orientation_rad", crystal.seed->orientation}};
  }
  return j.dump(2) + "\n";
}

IonCrystal crystal_from_json(std::string_view text) {
  try {
    const json j = json::parse(text.begin(), text.end());
    IonCrystal c;
    c.trap = trap_from_json(j.at("trap"));
    for (const auto& p : j.at("positions_m")) {
      if (!p.is_array() || p.size() != 2) throw ParseError("position entries must be [x, y]");
      c.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    c.potential_energy = j.at("energy_J").get<double>();
    c.gradient_norm = j.at("gradient_norm_N").get<double>();
    c.tolerance = j.value("tolerance_N", c.gradient_norm);
    c.iterations = j.value("iterations", 0L);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      c.seed = SeedInfo{s.at("shells").get<int>(), s.at("spacing_m").get<double>(),
                        s.at("orientation_rad").get<double>()};
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("crystal JSON: ") + e.what());
  }
}

std::string crystal_to_csv(const IonCrystal& crystal) {
  std::ostringstream out;
  out << "ion,x_m,y_m\n";
  for (std::size_t i = 0; i < crystal.positions.size(); ++i) {
    out << i << ',' << format_double(crystal.positions[i].x) << ','
        << format_double(crystal.positions[i].y) << '\n';
  }
  return out.str();
}

std::string modes_to_csv(const ModeSpectrum& spectrum) {
  std::ostringstream out;
  out << "m,omega_over_2pi_Hz\n";
  for (Eigen::Index m = 0; m < spectrum.size(); ++m) {
    out << (m + 1) << ',' << format_double(spectrum.frequencies(m) / constants::two_pi) << '\n';
  }
  return out.str();
}

std::string mode_vectors_to_json(const ModeSpectrum& spectrum, int top) {
  const Eigen::Index count = std::min<Eigen::Index>(std::max(top, 0), spectrum.size());
  json modes = json::array();
  json freqs = json::array();
  json b = json::array();
  for (Eigen::Index m = 0; m < count; ++m) {
    modes.push_back(m + 1);
    freqs.push_back(spectrum.frequencies(m) / constants::two_pi);
    json col = json::array();
    for (Eigen::Index i = 0; i < spectrum.modes.rows(); ++i) col.push_back(spectrum.modes(i, m));
    b.push_back(std::move(col));
  }
  json j{{"mode", modes}, {"omega_over_2pi_Hz", freqs}, {"b", b}};
  if (spectrum.crystal) {
    json pos = json::array();
    for (const auto& p : spectrum.crystal->positions) pos.push_back({p.x, p.y});
    j["positions_m"] = std::move(pos);
  }
  return j.dump() + "\n";
}

std::string pairs_to_csv(const Eigen::MatrixXd& J, const IonCrystal& crystal) {
  std::ostringstream out;
  out << "i,j,d_m,J_rad_s\n";
  const auto& pos = crystal.positions;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t k = i + 1; k < pos.size(); ++k) {
      out << i << ',' << k << ','
          << format_double(std::hypot(pos[i].x - pos[k].x, pos[i].y - pos[k].y)) << ','
          << format_double(J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))) << '\n';
    }
  }
  return out.str();
}

namespace {

// Hides the last-bit noise of the rad/s -> Hz conversion for grid values.
double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::string sweep_to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "detuning_Hz,Jbar_per_IR2,exponent_a\n";
  for (const auto& r : rows) {
    out << format_double(round_significant(r.detuning / constants::two_pi, 12)) << ','
        << format_double(r.mean_coupling_per_intensity2) << ','
        << (r.fit ? format_double(r.fit->exponent) : std::string("nan")) << '\n';
  }
  return out.str();
}

std::string fit_to_json(const PowerLawFit& fit) {
  json bins = json::array();
  for (const auto& b : fit.bins) {
    bins.push_back({{"d_m", b.distance}, {"J_rad_s", b.coupling}, {"pairs", b.pairs}});
  }
  json j{
      {"exponent_a", fit.exponent},
      {"prefactor_rad_s", fit.sign * fit.prefactor},
      {"rms_log_residual", fit.rms_residual},
      {"d0_m", fit.reference_spacing},
      {"bins", std::move(bins)},
  };
  return j.dump(2) + "\n";
}

}  // namespace penning
