#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "penning/errors.hpp"

namespace penning {

/// Static Penning-trap parameters that define the rotating-frame potential.
struct TrapConfig {
  double magnetic_field;   // B0, tesla
  double axial_frequency;  // omega_1 (COM along z), rad/s
  double rotation_frequency;  // omega_r, rad/s
  double wall_strength;    // dimensionless delta_wall, multiplies (1/2) M w1^2 r^2 cos(2 theta)
  double ion_mass;         // kg
  double ion_charge;       // C

  /// NIST ⁹Be⁺ benchmarking configuration: 4.46 T, 795 kHz, 45.6 kHz, delta_wall = 1e-3.
  static TrapConfig beryllium_default();

  double cyclotron_frequency() const { return magnetic_field * ion_charge / ion_mass; }

  /// Radial confinement in units of the axial one:
  /// beta = omega_r (Omega_c - omega_r) / omega_1^2 - 1/2.
  double beta() const;

  /// Spring constant M omega_1^2 of the axial well.
  double axial_stiffness() const { return ion_mass * axial_frequency * axial_frequency; }

  /// k q^2, the Coulomb energy scale in J m.
  double coulomb_strength() const;

  /// Natural length (k q^2 / (M omega_1^2 beta))^(1/3).
  double length_scale() const;

  /// Throws ConfigurationError on non-positive fields, a magnetron-unstable
  /// rotation (Omega_c <= 2 omega_r) or missing radial confinement (beta <= 0).
  void validate() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Positions = std::vector<Point>;

/// How the crystal was seeded; recorded so a run can be reproduced.
struct SeedInfo {
  int shells = 0;
  double spacing = 0.0;      // m
  double orientation = 0.0;  // rad, lattice axis angle from x
};

/// Zero-temperature planar equilibrium in the rotating frame.
struct IonCrystal {
  Positions positions;
  TrapConfig trap;
  double potential_energy = 0.0;  // J
  double gradient_norm = 0.0;     // N, largest |dE/dx_i|
  double tolerance = 0.0;         // N, convergence target the gradient met
  long iterations = 0;
  std::optional<SeedInfo> seed;

  std::size_t size() const { return positions.size(); }
};

/// Iteration cap reached before the gradient target. Carries the
/// lowest-energy state seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(IonCrystal best, const std::string& what)
      : Error("convergence", what), best_(std::move(best)) {}
  const IonCrystal& best() const noexcept { return best_; }

 private:
  IonCrystal best_;
};

/// Hexagonal-shell magic number 1 + 3 s (s + 1).
int closed_shell_count(int shells);

/// Triangular lattice of `closed_shell_count(shells)` points, one axis along
/// x, ordered shell by shell from the origin.
Positions seed_lattice(int shells, double spacing);

/// Smallest closed-shell seed with at least `ions` points, trimmed by
/// removing the outermost ones. Ties are broken by index.
Positions seed_for_count(int ions, double spacing);

/// Rotating-frame potential energy: trap + rotating wall + Coulomb.
/// Throws SingularConfigurationError when two ions coincide.
double rotating_frame_energy(std::span<const Point> positions, const TrapConfig& trap);

/// dE/dx_i, dE/dy_i interleaved as (x0, y0, x1, y1, ...).
std::vector<double> rotating_frame_gradient(std::span<const Point> positions,
                                            const TrapConfig& trap);

/// E(positions + step) - E(positions), evaluated term by term so that
/// tiny energy changes are not lost to cancellation against the total.
double rotating_frame_energy_change(std::span<const Point> positions,
                                    std::span<const double> step, const TrapConfig& trap);

struct MinimizerOptions {
  /// Per-component gradient target in newtons. Non-positive selects
  /// 1e-9 of the trap's natural force unit k q^2 / l^2.
  double tolerance = 0.0;
  long max_iterations = 100000;
  int history = 12;
  /// Called after each accepted step with (iteration, energy, gradient norm).
  std::function<void(long, double, double)> on_iteration;
};

double default_gradient_tolerance(const TrapConfig& trap);

/// Local minimum of `rotating_frame_energy` reached by limited-memory
/// quasi-Newton descent from `seed`. Throws ConvergenceError (with the
/// best state found) when the iteration cap is hit.
IonCrystal minimize_equilibrium(Positions seed, const TrapConfig& trap,
                                const MinimizerOptions& options = {});

/// Seeds a closed-shell lattice for `ions` ions, rescales it to the optimal
/// uniform size and minimizes.
IonCrystal equilibrium_crystal(int ions, const TrapConfig& trap,
                               const MinimizerOptions& options = {});

/// Median nearest-neighbour distance over the inner half of the crystal
/// (ions no farther from the centre than the median radius).
double nearest_neighbor_spacing(const IonCrystal& crystal);

/// Largest distance of an ion from the centre of charge.
double crystal_radius(const IonCrystal& crystal);

Point center_of_charge(std::span<const Point> positions);

}  // namespace penning
