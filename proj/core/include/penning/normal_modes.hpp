#pragma once

#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "penning/constants.hpp"
#include "penning/trap_crystal.hpp"

namespace penning {

/// Transverse (drumhead) modes of a planar crystal.
///
/// `frequencies(m)` is omega_m in rad/s, sorted descending so m = 0 is the
/// centre-of-mass mode. Column m of `modes` is the normalized eigenvector
/// b_{., m}; its largest-magnitude entry is positive.
struct ModeSpectrum {
  Eigen::VectorXd frequencies;
  Eigen::MatrixXd modes;
  double ion_mass = 0.0;
  std::shared_ptr<const IonCrystal> crystal;  // may be null for spectra built from K alone

  Eigen::Index size() const { return frequencies.size(); }
};

/// K_ii = M w1^2 - sum_n k q^2 / r_ni^3, K_ij = k q^2 / r_ij^3 (N/m).
/// The diagonal is formed from the off-diagonal sum, so every row sums to
/// M w1^2 up to rounding.
Eigen::MatrixXd stiffness_matrix(const IonCrystal& crystal);

/// Eigenvalues of K/M (rad^2/s^2), descending, without any stability check.
Eigen::VectorXd transverse_eigenvalues(const Eigen::MatrixXd& stiffness, double ion_mass);

/// Eigen-decomposition of K/M. Throws InstabilityError naming the number of
/// negative eigenvalues.
ModeSpectrum transverse_modes(const Eigen::MatrixXd& stiffness, double ion_mass);

/// Convenience: stiffness + eigenproblem, with the crystal attached.
ModeSpectrum transverse_modes(const IonCrystal& crystal);

struct PlaneTransition {
  double rotation_frequency;  // rad/s where the softest transverse mode reaches zero
  double lower;               // final bracket, rad/s (stable side)
  double upper;               // unstable side
  int iterations;
};

struct PlaneScanOptions {
  double tolerance = constants::two_pi * 50.0;  // rad/s on omega_r
  MinimizerOptions minimizer;
};

/// Bisection on omega_r for the single-plane stability edge of an N-ion
/// crystal (1 <-> 2 plane transition). Each probe re-solves the equilibrium
/// and the transverse eigenproblem. Throws BracketError when the smallest
/// eigenvalue has the same sign at both ends.
PlaneTransition plane_transition_scan(int ions, const TrapConfig& trap_template,
                                      double omega_r_low, double omega_r_high,
                                      const PlaneScanOptions& options = {});

}  // namespace penning
