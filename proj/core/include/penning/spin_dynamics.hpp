#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "penning/ising_coupling.hpp"
#include "penning/normal_modes.hpp"

namespace penning {

/// Inputs of the spin-echo benchmarking sequence.
struct SequenceParams {
  double theta_1 = 0.0;   // initial tipping angle about x, rad
  double tau_arm = 0.0;   // duration of each echo arm, s
  double mean_coupling = 0.0;  // J-bar, rad/s
  double decoherence = 0.0;    // Gamma, 1/s
  double chi = 0.0;       // uniform coupling for the Jz^2 engine, rad/s
  int spins = 1;

  void validate() const;
};

/// Mean-field probability of detecting |up> after the echo:
/// 1/2 (1 + exp(-Gamma 2 tau) sin(theta_1) sin(2 J-bar cos(theta_1) 2 tau)).
double mf_precession_probability(const SequenceParams& p);

enum class Axis { x, y };

/// Pure state of N spins-1/2 in the symmetric (J = N/2) subspace.
/// `amplitudes(k)` multiplies |J, M = -J + k>.
struct DickeState {
  Eigen::VectorXcd amplitudes;
  int spins = 0;

  /// |J, J>: every spin up.
  static DickeState all_up(int spins);

  double total_spin() const { return 0.5 * spins; }
  double projection(Eigen::Index k) const { return -total_spin() + static_cast<double>(k); }
  double norm() const { return amplitudes.norm(); }
  double expect_jz() const;
  double expect_jx() const;
  double expect_jy() const;
};

/// exp(-i angle J_axis) |state>. Generators are diagonalized once per N and
/// shared read-only between threads.
DickeState dicke_rotation(const DickeState& state, Axis axis, double angle);

/// Multiplies the M component by exp(-i (2 chi / N) M^2 t).
DickeState dicke_jz2_phase(const DickeState& state, double chi, double t);

/// <J_z> after R(y, pi/2) U(tau) R(y, pi) U(tau) R(x, theta_1) |J, J>, with
/// U(t) = exp(-i (2 chi / N) J_z^2 t). A non-zero `decoherence` multiplies
/// the result by exp(-Gamma 2 tau).
double exact_sequence_jz(int spins, double chi, double tau_arm, double theta_1,
                         double decoherence = 0.0);

struct BruteForceResult {
  double jz;     // <J_z>
  double p_up;   // average single-spin probability of |up>
};

inline constexpr int kBruteForceMaxSpins = 12;

/// Full 2^N state-vector evolution of the same echo under
/// H = (1/N) sum_{i<j} J_ij sigma_i^z sigma_j^z. Throws CapacityError for
/// N > kBruteForceMaxSpins.
BruteForceResult brute_force_sequence(const Eigen::MatrixXd& couplings, double tau_arm,
                                      double theta_1);
BruteForceResult brute_force_sequence(int spins, double chi, double tau_arm, double theta_1);

/// chi t / (sqrt(N) / 4); mean-field precession needs this well below 1.
double mf_validity_bound(int spins, double chi, double t);

struct SpinMotionReport {
  std::vector<double> margins;  // per mode, infinite when F0 = 0
  double min_margin = 0.0;
  int worst_mode = 0;     // 1-based
  bool satisfied = false;  // every margin > 1
  bool force_free = false; // F0 = 0, margins are sentinels
};

/// hbar |mu_R - omega_m| / (F0 sqrt(hbar (2 nbar_m + 1) / (2 M omega_m))) per
/// mode, nbar_m = k_B T / (hbar omega_m). `composite_sqrt_n` additionally
/// divides every margin by sqrt(N).
SpinMotionReport spin_motion_criterion(const ModeSpectrum& spectrum, const ODFDrive& drive,
                                       double temperature, bool composite_sqrt_n = false);

}  // namespace penning
