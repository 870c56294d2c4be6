#include <cmath>
#include <string>

#include "lbfgs.hpp"
#include "penning/trap_crystal.hpp"

namespace penning {

namespace {

// The minimizer works in units of the trap's natural length l and energy
// k q^2 / l, where all force terms are O(1).
struct Scaled {
  const TrapConfig& trap;
  double length;
  double energy_unit;

  Positions to_positions(const std::vector<double>& u) const {
    Positions p(u.size() / 2);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = {u[2 * i] * length, u[2 * i + 1] * length};
    return p;
  }
  std::vector<double> gradient(const std::vector<double>& u) const {
    auto g = rotating_frame_gradient(to_positions(u), trap);
    const double s = length / energy_unit;
    for (auto& e : g) e *= s;
    return g;
  }
  double delta(const std::vector<double>& u, const std::vector<double>& step) const {
    std::vector<double> s(step);
    for (auto& e : s) e *= length;
    return rotating_frame_energy_change(to_positions(u), s, trap) / energy_unit;
  }
};

}  // namespace

IonCrystal minimize_equilibrium(Positions seed, const TrapConfig& trap,
                                const MinimizerOptions& options) {
  trap.validate();
  if (seed.empty()) {
    throw ArityError("cannot minimize an empty crystal");
  }
  const double tol = options.tolerance > 0 ? options.tolerance : default_gradient_tolerance(trap);

  const double l = trap.length_scale();
  const Scaled scaled{trap, l, trap.coulomb_strength() / l};
  const double force_unit = scaled.energy_unit / l;

  std::vector<double> u(2 * seed.size());
  for (std::size_t i = 0; i < seed.size(); ++i) {
    u[2 * i] = seed[i].x / l;
    u[2 * i + 1] = seed[i].y / l;
  }
  // Fails early with SingularConfigurationError on coincident seeds.
  const double e0 = rotating_frame_energy(seed, trap);

  detail::LbfgsSettings cfg{
      .tolerance = tol / force_unit,
      .max_iterations = options.max_iterations,
      .history = std::max(1, options.history),
      .max_step = 0.2,
  };
  auto observe = [&](long it, double change, const std::vector<double>& g) {
    if (options.on_iteration) {
      options.on_iteration(it, e0 + change * scaled.energy_unit, detail::inf_norm(g) * force_unit);
    }
  };
  auto result = detail::lbfgs_minimize(
      std::move(u), [&](const auto& x) { return scaled.gradient(x); },
      [&](const auto& x, const auto& s) { return scaled.delta(x, s); }, observe, cfg);

  IonCrystal crystal;
  crystal.positions = scaled.to_positions(result.x);
  crystal.trap = trap;
  crystal.potential_energy = rotating_frame_energy(crystal.positions, trap);
  crystal.gradient_norm = detail::inf_norm(result.gradient) * force_unit;
  crystal.tolerance = tol;
  crystal.iterations = result.iterations;
  if (!result.converged) {
    throw ConvergenceError(std::move(crystal),
                           "equilibrium search stopped after " +
                               std::to_string(result.iterations) +
                               " iterations above the gradient tolerance");
  }
  return crystal;
}

IonCrystal equilibrium_crystal(int ions, const TrapConfig& trap, const MinimizerOptions& options) {
  trap.validate();
  int shells = 0;
  while (closed_shell_count(shells) < ions) ++shells;

  // E(s) = A s^2 + C / s for a uniformly scaled seed; start at its minimum.
  const Positions unit = seed_for_count(ions, 1.0);
  double spacing = trap.length_scale();
  if (unit.size() > 1) {
    const double k = 0.5 * trap.axial_stiffness();
    double a = 0.0;
    for (const auto& p : unit) {
      a += k * ((trap.beta() + trap.wall_strength) * p.x * p.x +
                (trap.beta() - trap.wall_strength) * p.y * p.y);
    }
    const double c = rotating_frame_energy(unit, trap) - a;
    spacing = std::cbrt(c / (2.0 * a));
  }
  Positions seed = seed_for_count(ions, spacing);
  IonCrystal crystal = minimize_equilibrium(std::move(seed), trap, options);
  crystal.seed = SeedInfo{shells, spacing, 0.0};
  return crystal;
}

}  // namespace penning
