#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "penning/constants.hpp"
#include "penning/normal_modes.hpp"

namespace penning {

/// Spin-dependent optical dipole force F_z(t) = F0 cos(mu_R t).
struct ODFDrive {
  double beat_frequency = 0.0;  // mu_R, rad/s
  double force = 0.0;           // F0, N
  double intensity = 0.0;       // I_R per beam, W/cm^2 (0 when F0 was given directly)
  double beam_angle = 0.0;      // theta_R, rad
};

/// Ising couplings J_ij in rad/s, zero on the diagonal.
struct CouplingMatrix {
  Eigen::MatrixXd J;
  ODFDrive drive;
  std::shared_ptr<const ModeSpectrum> spectrum;

  Eigen::Index size() const { return J.rows(); }
};

inline constexpr double kDefaultResonanceGuard = constants::two_pi * 10.0;

/// J_ij = F0^2 N / (2 hbar M) * sum_m b_im b_jm / (mu_R^2 - omega_m^2).
/// Throws ResonanceError if |mu_R - omega_m| is inside `resonance_guard`.
CouplingMatrix coupling_matrix(const ModeSpectrum& spectrum, const ODFDrive& drive,
                               double resonance_guard = kDefaultResonanceGuard);

/// J-bar = (1/N^2) sum_j sum_{i != j} J_ij.
double mean_coupling(const Eigen::MatrixXd& J);
inline double mean_coupling(const CouplingMatrix& c) { return mean_coupling(c.J); }

/// Separation-independent coupling of the near-COM limit,
/// chi = F0^2 / (2 hbar M) / (mu_R^2 - omega_1^2).
double uniform_limit_chi(const ODFDrive& drive, double omega_1, double ion_mass,
                         double resonance_guard = kDefaultResonanceGuard);

struct PowerLawFit {
  double exponent = 0.0;      // a in J ~ d^-a
  double prefactor = 0.0;     // |J| at d = d0, rad/s (sign in `sign`)
  double rms_residual = 0.0;  // of log|J|
  int sign = 1;               // +1 antiferromagnetic, -1 ferromagnetic
  double reference_spacing = 0.0;  // d0, m
  struct Bin {
    double distance;  // mean separation in the bin, m
    double coupling;  // mean J in the bin, rad/s
    int pairs;
  };
  std::vector<Bin> bins;
};

struct PowerLawFitOptions {
  double bin_ratio = 1.25;            // width factor of each logarithmic bin
  double max_radius_fraction = 0.5;   // fit pairs with d <= fraction * crystal radius
  int min_bins = 5;
};

/// Log-binned power-law fit of J_ij against d_ij over [d0, 0.5 R].
/// Throws FitError("sign_mixed") when bin means change sign and
/// FitError("insufficient_bins") when fewer than `min_bins` are populated.
PowerLawFit power_law_fit(const Eigen::MatrixXd& J, const IonCrystal& crystal,
                          const PowerLawFitOptions& options = {});

struct SweepRow {
  double detuning;       // mu_R - omega_1, rad/s
  double mean_coupling;  // J-bar, rad/s
  double mean_coupling_per_intensity2;  // J-bar / I_R^2, rad/s per (W/cm^2)^2
  std::optional<PowerLawFit> fit;       // empty in the sign-mixed regime
};

/// One row per detuning, in input order. `drive_template` supplies F0,
/// I_R and theta_R; its beat frequency is ignored. Rows are computed on up
/// to `threads` workers.
std::vector<SweepRow> detuning_sweep(const ModeSpectrum& spectrum, const IonCrystal& crystal,
                                     const ODFDrive& drive_template,
                                     std::span<const double> detunings, int threads = 1,
                                     double resonance_guard = kDefaultResonanceGuard);

}  // namespace penning
