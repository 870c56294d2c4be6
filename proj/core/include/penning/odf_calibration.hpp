#pragma once

#include <optional>
#include <vector>

#include "penning/ising_coupling.hpp"
#include "penning/normal_modes.hpp"
#include "penning/units.hpp"

namespace penning {

/// ODF beam pair in the y-z plane at +-theta_R/2, 0 < theta_R <= pi.
struct BeamGeometry {
  double wavelength = 313e-9;          // m
  double beam_angle = degrees(4.8);    // theta_R, rad
  double misalignment = 0.0;           // theta_err, rad
  double polarization_upper = degrees(65.3);   // phi_p,u, rad
  double polarization_lower = degrees(-65.3);  // phi_p,l, rad

  void validate() const;
};

/// Qubit-level light shifts for pi (A) and sigma (B) polarized light, rad/s.
struct StarkCoefficients {
  double a_up = 0.0;
  double a_down = 0.0;
  double b_up = 0.0;
  double b_down = 0.0;
};

namespace calibration {
/// F0 at I_R = 1 W/cm^2 and theta_R = 4.8 deg (Delta_R = -63.8 GHz, phi_p = +-65 deg).
inline constexpr double kReferenceForce = 1.4e-23;  // N
inline constexpr double kReferenceBeamAngle = 4.8 * constants::pi / 180.0;
/// Spontaneous-emission decoherence at I_R = 1 W/cm^2, same laser detuning and polarization.
inline constexpr double kReferenceDecoherence = 82.0;  // 1/s
}  // namespace calibration

/// delta_k = |k_U - k_L| = 2 (2 pi / lambda) sin(theta_R / 2), 1/m.
double delta_k(const BeamGeometry& geometry);

/// Optical-lattice period lambda_R = 2 pi / delta_k, m.
double lattice_wavelength(const BeamGeometry& geometry);

/// F0 = 1.4e-23 N * I_R * sin(theta_R/2) / sin(2.4 deg); the lattice force
/// scales with delta_k.
double f0_from_intensity(double intensity_w_per_cm2, const BeamGeometry& geometry);

/// Gamma = 82 s^-1 per W/cm^2, independent of beam angle.
double gamma_from_intensity(double intensity_w_per_cm2);

/// Drive with F0 taken from the intensity calibration.
ODFDrive make_drive(double beat_frequency, double intensity_w_per_cm2,
                    const BeamGeometry& geometry);

/// Differential light shift (A_up - A_down) cos^2 phi + (B_up - B_down) sin^2 phi.
double stark_shift(double polarization, const StarkCoefficients& c);

/// Polarization angle in [0, pi/2] that nulls `stark_shift`, if the two
/// differences have opposite signs.
std::optional<double> stark_null_angle(const StarkCoefficients& c);

/// Thermal rms axial extent of each ion, summed over transverse modes with
/// nbar_m = k_B T / (hbar omega_m). Throws InstabilityError for
/// non-positive frequencies and ConfigurationError for T < 0.
std::vector<double> z_rms_profile(const ModeSpectrum& spectrum, double temperature);

/// eta_ind = delta_k z_rms.
double lamb_dicke_parameter(double z_rms, const BeamGeometry& geometry);

/// delta_k 2 R_P sin(theta_err); wavefront tilt is negligible when this is below 1.
double tilt_modulation_index(const BeamGeometry& geometry, double array_radius);

}  // namespace penning
