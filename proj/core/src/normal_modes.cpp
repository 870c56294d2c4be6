#include "penning/normal_modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "penning/constants.hpp"

namespace penning {

Eigen::MatrixXd stiffness_matrix(const IonCrystal& crystal) {
  const auto& pos = crystal.positions;
  const Eigen::Index n = static_cast<Eigen::Index>(pos.size());
  const double kq2 = crystal.trap.coulomb_strength();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = pos[i].x - pos[j].x;
      const double dy = pos[i].y - pos[j].y;
      const double r2 = dx * dx + dy * dy;
      if (!(r2 > 0)) {
        throw SingularConfigurationError("ions " + std::to_string(i) + " and " +
                                         std::to_string(j) + " coincide");
      }
      const double c = kq2 / (r2 * std::sqrt(r2));
      k(i, j) = c;
      k(j, i) = c;
    }
  }
  const double axial = crystal.trap.axial_stiffness();
  for (Eigen::Index i = 0; i < n; ++i) {
    double coulomb = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) coulomb += k(i, j);
    k(i, i) = axial - coulomb;
  }
  return k;
}

namespace {

struct SortedEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

SortedEigen solve_descending(const Eigen::MatrixXd& stiffness, double ion_mass, bool vectors) {
  if (stiffness.rows() != stiffness.cols()) {
    throw ConfigurationError("stiffness matrix must be square");
  }
  if (!(ion_mass > 0)) {
    throw ConfigurationError("ion mass must be positive");
  }
  const Eigen::MatrixXd a = stiffness / ion_mass;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConfigurationError("symmetric eigensolver failed");
  }
  // Eigen returns ascending order.
  SortedEigen out;
  out.values = solver.eigenvalues().reverse();
  if (vectors) out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

}  // namespace

Eigen::VectorXd transverse_eigenvalues(const Eigen::MatrixXd& stiffness, double ion_mass) {
  return solve_descending(stiffness, ion_mass, false).values;
}

ModeSpectrum transverse_modes(const Eigen::MatrixXd& stiffness, double ion_mass) {
  auto eig = solve_descending(stiffness, ion_mass, true);
  const Eigen::Index n = eig.values.size();

  const int unstable =
      static_cast<int>(std::count_if(eig.values.begin(), eig.values.end(), [](double v) { return v < 0; }));
  if (unstable > 0) {
    throw InstabilityError(unstable, std::to_string(unstable) +
                                         " transverse mode(s) unstable: crystal is not a stable "
                                         "single plane");
  }

  for (Eigen::Index m = 0; m < n; ++m) {
    Eigen::Index arg = 0;
    eig.vectors.col(m).cwiseAbs().maxCoeff(&arg);
    if (eig.vectors(arg, m) < 0) eig.vectors.col(m) *= -1.0;
  }

  ModeSpectrum spectrum;
  spectrum.frequencies = eig.values.cwiseSqrt();
  spectrum.modes = std::move(eig.vectors);
  spectrum.ion_mass = ion_mass;
  return spectrum;
}

ModeSpectrum transverse_modes(const IonCrystal& crystal) {
  auto spectrum = transverse_modes(stiffness_matrix(crystal), crystal.trap.ion_mass);
  spectrum.crystal = std::make_shared<const IonCrystal>(crystal);
  return spectrum;
}

namespace {

double softest_eigenvalue(int ions, const TrapConfig& trap, const MinimizerOptions& opts) {
  const IonCrystal crystal = equilibrium_crystal(ions, trap, opts);
  return transverse_eigenvalues(stiffness_matrix(crystal), trap.ion_mass).tail(1)(0);
}

}  // namespace

PlaneTransition plane_transition_scan(int ions, const TrapConfig& trap_template, double omega_r_low,
                                      double omega_r_high, const PlaneScanOptions& options) {
  if (ions < 1) throw ArityError("plane_transition_scan needs at least one ion");
  if (!(omega_r_high > omega_r_low)) throw BracketError("empty rotation-frequency range");

  auto probe = [&](double wr) {
    TrapConfig t = trap_template;
    t.rotation_frequency = wr;
    return softest_eigenvalue(ions, t, options.minimizer);
  };

  double lo = omega_r_low;
  double hi = omega_r_high;
  const double f_lo = probe(lo);
  const double f_hi = probe(hi);
  if ((f_lo < 0) == (f_hi < 0)) {
    throw BracketError("softest transverse eigenvalue does not change sign on [" +
                       std::to_string(lo / constants::two_pi) + ", " +
                       std::to_string(hi / constants::two_pi) + "] Hz");
  }
  // Orient so that `lo` is the stable end.
  const bool flipped = f_lo < 0;
  if (flipped) std::swap(lo, hi);

  int iterations = 0;
  while (std::abs(hi - lo) > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid) < 0) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++iterations;
  }
  return PlaneTransition{0.5 * (lo + hi), lo, hi, iterations};
}

}  // namespace penning
