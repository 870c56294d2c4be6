#include "penning/trap_crystal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "penning/constants.hpp"
#include "penning/units.hpp"

namespace penning {

namespace {

struct Axial {
  int q;
  int r;
};

// Axial-coordinate neighbour offsets, walked in order around a hexagonal ring.
constexpr std::array<Axial, 6> kRingSteps{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

std::vector<Axial> hex_shells(int shells) {
  std::vector<Axial> cells;
  cells.reserve(static_cast<std::size_t>(closed_shell_count(shells)));
  cells.push_back({0, 0});
  for (int k = 1; k <= shells; ++k) {
    Axial cell{-k, k};  // k steps along direction 4
    for (const auto& step : kRingSteps) {
      for (int j = 0; j < k; ++j) {
        cells.push_back(cell);
        cell.q += step.q;
        cell.r += step.r;
      }
    }
  }
  return cells;
}

Point to_point(Axial a, double spacing) {
  return {spacing * (a.q + 0.5 * a.r), spacing * (std::sqrt(3.0) / 2.0) * a.r};
}

// Squared lattice norm in units of spacing^2; exact in integers.
int lattice_norm(Axial a) { return a.q * a.q + a.q * a.r + a.r * a.r; }

// Below this separation (relative to the natural length) the pair is singular.
constexpr double kCoincidenceFraction = 1e-9;

void check_separation(double r2, double min_r2, std::size_t i, std::size_t j) {
  if (!(r2 > min_r2)) {
    throw SingularConfigurationError("ions " + std::to_string(i) + " and " + std::to_string(j) +
                                     " coincide");
  }
}

double min_separation_sq(const TrapConfig& trap) {
  const double l = kCoincidenceFraction * trap.length_scale();
  return std::isfinite(l) ? l * l : 0.0;
}

}  // namespace

TrapConfig TrapConfig::beryllium_default() {
  return TrapConfig{
      .magnetic_field = 4.46,
      .axial_frequency = khz(795.0),
      .rotation_frequency = khz(45.6),
      .wall_strength = 1e-3,
      .ion_mass = constants::beryllium9_ion_mass,
      .ion_charge = constants::elementary_charge,
  };
}

double TrapConfig::beta() const {
  const double w1 = axial_frequency;
  return rotation_frequency * (cyclotron_frequency() - rotation_frequency) / (w1 * w1) - 0.5;
}

double TrapConfig::coulomb_strength() const {
  return constants::coulomb * ion_charge * ion_charge;
}

double TrapConfig::length_scale() const {
  return std::cbrt(coulomb_strength() / (axial_stiffness() * beta()));
}

void TrapConfig::validate() const {
  if (!(magnetic_field > 0) || !(axial_frequency > 0) || !(rotation_frequency > 0) ||
      !(ion_mass > 0) || !(ion_charge > 0)) {
    throw ConfigurationError("trap fields must be strictly positive");
  }
  if (!(wall_strength >= 0)) {
    throw ConfigurationError("wall_strength must be >= 0");
  }
  if (!(cyclotron_frequency() > 2.0 * rotation_frequency)) {
    throw ConfigurationError("rotation frequency must be below half the cyclotron frequency");
  }
  const double b = beta();
  if (!(b > 0)) {
    throw ConfigurationError("no radial confinement: beta = " + std::to_string(b));
  }
  if (!(wall_strength < b)) {
    throw ConfigurationError("wall_strength must be smaller than beta");
  }
}

int closed_shell_count(int shells) {
  if (shells < 0) {
    throw ConfigurationError("shell count must be non-negative");
  }
  return 1 + 3 * shells * (shells + 1);
}

Positions seed_lattice(int shells, double spacing) {
  if (shells < 0 || !(spacing > 0)) {
    throw ConfigurationError("seed_lattice needs shells >= 0 and spacing > 0");
  }
  const auto cells = hex_shells(shells);
  Positions out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(to_point(c, spacing));
  return out;
}

Positions seed_for_count(int ions, double spacing) {
  if (ions < 1) {
    throw ArityError("need at least one ion");
  }
  int shells = 0;
  while (closed_shell_count(shells) < ions) ++shells;
  const auto cells = hex_shells(shells);

  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lattice_norm(cells[a]) < lattice_norm(cells[b]);
  });
  order.resize(static_cast<std::size_t>(ions));
  std::sort(order.begin(), order.end());

  Positions out;
  out.reserve(order.size());
  for (auto idx : order) out.push_back(to_point(cells[idx], spacing));
  return out;
}

double rotating_frame_energy(std::span<const Point> positions, const TrapConfig& trap) {
  const double half_k = 0.5 * trap.axial_stiffness();
  const double bx = trap.beta() + trap.wall_strength;
  const double by = trap.beta() - trap.wall_strength;
  const double kq2 = trap.coulomb_strength();
  const double min_r2 = min_separation_sq(trap);

  double trap_energy = 0.0;
  for (const auto& p : positions) trap_energy += half_k * (bx * p.x * p.x + by * p.y * p.y);

  double coulomb_energy = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      const double dx = positions[i].x - positions[j].x;
      const double dy = positions[i].y - positions[j].y;
      const double r2 = dx * dx + dy * dy;
      check_separation(r2, min_r2, i, j);
      coulomb_energy += kq2 / std::sqrt(r2);
    }
  }
  return trap_energy + coulomb_energy;
}

std::vector<double> rotating_frame_gradient(std::span<const Point> positions,
                                            const TrapConfig& trap) {
  const double k = trap.axial_stiffness();
  const double kx = k * (trap.beta() + trap.wall_strength);
  const double ky = k * (trap.beta() - trap.wall_strength);
  const double kq2 = trap.coulomb_strength();
  const double min_r2 = min_separation_sq(trap);

  const std::size_t n = positions.size();
  std::vector<double> grad(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    grad[2 * i] = kx * positions[i].x;
    grad[2 * i + 1] = ky * positions[i].y;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = positions[i].x - positions[j].x;
      const double dy = positions[i].y - positions[j].y;
      const double r2 = dx * dx + dy * dy;
      check_separation(r2, min_r2, i, j);
      const double s = kq2 / (r2 * std::sqrt(r2));
      grad[2 * i] -= s * dx;
      grad[2 * i + 1] -= s * dy;
      grad[2 * j] += s * dx;
      grad[2 * j + 1] += s * dy;
    }
  }
  return grad;
}

double rotating_frame_energy_change(std::span<const Point> positions,
                                    std::span<const double> step, const TrapConfig& trap) {
  const double half_k = 0.5 * trap.axial_stiffness();
  const double bx = trap.beta() + trap.wall_strength;
  const double by = trap.beta() - trap.wall_strength;
  const double kq2 = trap.coulomb_strength();
  const double min_r2 = min_separation_sq(trap);
  const std::size_t n = positions.size();

  double change = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sx = step[2 * i];
    const double sy = step[2 * i + 1];
    change += half_k * (bx * sx * (2.0 * positions[i].x + sx) + by * sy * (2.0 * positions[i].y + sy));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = positions[i].x - positions[j].x;
      const double dy = positions[i].y - positions[j].y;
      const double ex = step[2 * i] - step[2 * j];
      const double ey = step[2 * i + 1] - step[2 * j + 1];
      const double r2 = dx * dx + dy * dy;
      const double grow = ex * (2.0 * dx + ex) + ey * (2.0 * dy + ey);  // r'^2 - r^2
      const double r2_new = r2 + grow;
      check_separation(r2_new, min_r2, i, j);
      const double r = std::sqrt(r2);
      const double r_new = std::sqrt(r2_new);
      change -= kq2 * grow / (r * r_new * (r + r_new));
    }
  }
  return change;
}

double default_gradient_tolerance(const TrapConfig& trap) {
  const double l = trap.length_scale();
  return 1e-9 * trap.coulomb_strength() / (l * l);
}

Point center_of_charge(std::span<const Point> positions) {
  Point c;
  if (positions.empty()) return c;
  for (const auto& p : positions) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(positions.size());
  c.y /= static_cast<double>(positions.size());
  return c;
}

double crystal_radius(const IonCrystal& crystal) {
  const Point c = center_of_charge(crystal.positions);
  double r = 0.0;
  for (const auto& p : crystal.positions) r = std::max(r, std::hypot(p.x - c.x, p.y - c.y));
  return r;
}

double nearest_neighbor_spacing(const IonCrystal& crystal) {
  const auto& pos = crystal.positions;
  const std::size_t n = pos.size();
  if (n < 2) {
    throw ArityError("nearest_neighbor_spacing needs at least two ions");
  }
  const Point c = center_of_charge(pos);
  std::vector<double> radius(n);
  for (std::size_t i = 0; i < n; ++i) radius[i] = std::hypot(pos[i].x - c.x, pos[i].y - c.y);

  auto sorted = radius;
  std::sort(sorted.begin(), sorted.end());
  // Lower median, nudged by a relative epsilon so symmetric shells stay whole.
  const double cut = sorted[(n - 1) / 2] * (1.0 + 1e-9) + 1e-300;

  std::vector<double> nn;
  for (std::size_t i = 0; i < n; ++i) {
    if (radius[i] > cut) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y));
    }
    nn.push_back(best);
  }
  std::sort(nn.begin(), nn.end());
  const std::size_t m = nn.size();
  return (m % 2 == 1) ? nn[m / 2] : 0.5 * (nn[m / 2 - 1] + nn[m / 2]);
}

}  // namespace penning
