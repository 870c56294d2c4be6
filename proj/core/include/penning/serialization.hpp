#pragma once

#include <span>
#include <string>
#include <string_view>

#include "penning/ising_coupling.hpp"
#include "penning/normal_modes.hpp"
#include "penning/trap_crystal.hpp"

namespace penning {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// {"trap": {...}, "positions_m": [[x, y], ...], "energy_J": e, "gradient_norm_N": g, ...}
std::string crystal_to_json(const IonCrystal& crystal);

/// Inverse of crystal_to_json. Throws ParseError on missing or malformed fields.
IonCrystal crystal_from_json(std::string_view text);

/// Header `ion,x_m,y_m`.
std::string crystal_to_csv(const IonCrystal& crystal);

/// Header `m,omega_over_2pi_Hz`, m starting at 1 (COM).
std::string modes_to_csv(const ModeSpectrum& spectrum);

/// {"mode": [...], "omega_over_2pi_Hz": [...], "b": [[b_1m, ..., b_Nm], ...]} for the
/// `top` highest-frequency modes.
std::string mode_vectors_to_json(const ModeSpectrum& spectrum, int top);

/// Header `i,j,d_m,J_rad_s` for every pair i < j (0-based indices).
std::string pairs_to_csv(const Eigen::MatrixXd& J, const IonCrystal& crystal);

/// Header `detuning_Hz,Jbar_per_IR2,exponent_a`; J-bar / I_R^2 in rad/s per
/// (W/cm^2)^2, exponent `nan` where no power law fits.
std::string sweep_to_csv(std::span<const SweepRow> rows);

std::string fit_to_json(const PowerLawFit& fit);

}  // namespace penning
