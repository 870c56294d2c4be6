#include "penning/spin_dynamics.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "penning/constants.hpp"

namespace penning {

void SequenceParams::validate() const {
  if (!(tau_arm >= 0)) throw ConfigurationError("tau_arm must be non-negative");
  if (!(decoherence >= 0)) throw ConfigurationError("decoherence rate must be non-negative");
  if (spins < 1) throw ArityError("sequence needs at least one spin");
}

double mf_precession_probability(const SequenceParams& p) {
  p.validate();
  const double t = 2.0 * p.tau_arm;
  return 0.5 * (1.0 + std::exp(-p.decoherence * t) * std::sin(p.theta_1) *
                          std::sin(2.0 * p.mean_coupling * std::cos(p.theta_1) * t));
}

namespace {

using std::complex;
using namespace std::complex_literals;

// Eigen-decomposition of J_x in the |J, M> basis (real symmetric tridiagonal).
struct RotationGenerator {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
  Eigen::VectorXcd quarter_turn;  // diagonal of exp(-i pi/2 J_z)

  explicit RotationGenerator(int spins) {
    const Eigen::Index dim = spins + 1;
    const double j = 0.5 * spins;
    Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k + 1 < dim; ++k) {
      const double m = -j + static_cast<double>(k);
      // <M+1| J_+ |M> / 2
      const double e = 0.5 * std::sqrt(j * (j + 1) - m * (m + 1));
      jx(k + 1, k) = e;
      jx(k, k + 1) = e;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jx);
    vectors = solver.eigenvectors();
    values = solver.eigenvalues();
    quarter_turn.resize(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double m = -j + static_cast<double>(k);
      quarter_turn(k) = std::exp(-1i * (constants::pi / 2.0) * m);
    }
  }

  // exp(-i angle J_x) v
  Eigen::VectorXcd rotate_x(const Eigen::VectorXcd& v, double angle) const {
    Eigen::VectorXcd w = vectors.transpose().cast<complex<double>>() * v;
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) *= std::exp(-1i * angle * values(k));
    return vectors.cast<complex<double>>() * w;
  }

  // exp(-i angle J_y) = Q exp(-i angle J_x) Q^dagger, Q = exp(-i pi/2 J_z).
  Eigen::VectorXcd rotate_y(const Eigen::VectorXcd& v, double angle) const {
    Eigen::VectorXcd w = quarter_turn.conjugate().cwiseProduct(v);
    w = rotate_x(w, angle);
    return quarter_turn.cwiseProduct(w);
  }
};

std::shared_ptr<const RotationGenerator> generator_for(int spins) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const RotationGenerator>> cache;
  std::scoped_lock lock(mutex);
  auto& slot = cache[spins];
  if (!slot) slot = std::make_shared<const RotationGenerator>(spins);
  return slot;
}

void check_state(const DickeState& s) {
  if (s.spins < 1 || s.amplitudes.size() != s.spins + 1) {
    throw ArityError("Dicke state dimension must be N + 1");
  }
}

}  // namespace

DickeState DickeState::all_up(int spins) {
  if (spins < 1) throw ArityError("need at least one spin");
  DickeState s;
  s.spins = spins;
  s.amplitudes = Eigen::VectorXcd::Zero(spins + 1);
  s.amplitudes(spins) = 1.0;
  return s;
}

double DickeState::expect_jz() const {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k) acc += std::norm(amplitudes(k)) * projection(k);
  return acc;
}

namespace {

// <J_+> = sum_M sqrt(J(J+1) - M(M+1)) conj(c_{M+1}) c_M
complex<double> expect_raising(const DickeState& s) {
  const double j = s.total_spin();
  complex<double> acc = 0.0;
  for (Eigen::Index k = 0; k + 1 < s.amplitudes.size(); ++k) {
    const double m = s.projection(k);
    acc += std::sqrt(j * (j + 1) - m * (m + 1)) * std::conj(s.amplitudes(k + 1)) * s.amplitudes(k);
  }
  return acc;
}

}  // namespace

double DickeState::expect_jx() const { return expect_raising(*this).real(); }
double DickeState::expect_jy() const { return expect_raising(*this).imag(); }

DickeState dicke_rotation(const DickeState& state, Axis axis, double angle) {
  check_state(state);
  const auto gen = generator_for(state.spins);
  DickeState out = state;
  out.amplitudes = axis == Axis::x ? gen->rotate_x(state.amplitudes, angle)
                                   : gen->rotate_y(state.amplitudes, angle);
  return out;
}

DickeState dicke_jz2_phase(const DickeState& state, double chi, double t) {
  check_state(state);
  DickeState out = state;
  const double rate = 2.0 * chi / static_cast<double>(state.spins);
  for (Eigen::Index k = 0; k < out.amplitudes.size(); ++k) {
    const double m = state.projection(k);
    out.amplitudes(k) *= std::exp(-1i * rate * m * m * t);
  }
  return out;
}

double exact_sequence_jz(int spins, double chi, double tau_arm, double theta_1,
                         double decoherence) {
  if (!(tau_arm >= 0) || !(decoherence >= 0)) {
    throw ConfigurationError("tau_arm and decoherence must be non-negative");
  }
  DickeState s = DickeState::all_up(spins);
  s = dicke_rotation(s, Axis::x, theta_1);
  s = dicke_jz2_phase(s, chi, tau_arm);
  s = dicke_rotation(s, Axis::y, constants::pi);
  s = dicke_jz2_phase(s, chi, tau_arm);
  s = dicke_rotation(s, Axis::y, constants::pi / 2.0);
  return std::exp(-decoherence * 2.0 * tau_arm) * s.expect_jz();
}

namespace {

// Applies the same 2x2 unitary to every qubit. Bit q of the index is 0 for
// spin up, 1 for spin down.
void rotate_each(std::vector<complex<double>>& psi, int n, const complex<double> (&u)[2][2]) {
  const std::size_t dim = psi.size();
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t idx = 0; idx < dim; ++idx) {
      if (idx & bit) continue;
      const complex<double> up = psi[idx];
      const complex<double> dn = psi[idx | bit];
      psi[idx] = u[0][0] * up + u[0][1] * dn;
      psi[idx | bit] = u[1][0] * up + u[1][1] * dn;
    }
  }
}

void rotate_x_all(std::vector<complex<double>>& psi, int n, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const complex<double> u[2][2] = {{c, -1i * s}, {-1i * s, c}};
  rotate_each(psi, n, u);
}

void rotate_y_all(std::vector<complex<double>>& psi, int n, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const complex<double> u[2][2] = {{c, -s}, {s, c}};
  rotate_each(psi, n, u);
}

}  // namespace

BruteForceResult brute_force_sequence(const Eigen::MatrixXd& couplings, double tau_arm,
                                      double theta_1) {
  const int n = static_cast<int>(couplings.rows());
  if (couplings.rows() != couplings.cols()) throw ArityError("coupling matrix must be square");
  if (n < 1) throw ArityError("need at least one spin");
  if (n > kBruteForceMaxSpins) {
    throw CapacityError("brute-force state vector limited to " +
                        std::to_string(kBruteForceMaxSpins) + " spins, got " + std::to_string(n));
  }
  const std::size_t dim = std::size_t{1} << n;

  // Diagonal Ising energies (1/N) sum_{i<j} J_ij z_i z_j.
  std::vector<double> energy(dim, 0.0);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double zi = (idx >> i) & 1u ? -1.0 : 1.0;
      for (int j = i + 1; j < n; ++j) {
        const double zj = (idx >> j) & 1u ? -1.0 : 1.0;
        e += couplings(i, j) * zi * zj;
      }
    }
    energy[idx] = e / n;
  }
  auto evolve = [&](std::vector<complex<double>>& psi) {
    for (std::size_t idx = 0; idx < dim; ++idx) psi[idx] *= std::exp(-1i * energy[idx] * tau_arm);
  };

  std::vector<complex<double>> psi(dim, 0.0);
  psi[0] = 1.0;
  rotate_x_all(psi, n, theta_1);
  evolve(psi);
  rotate_y_all(psi, n, constants::pi);
  evolve(psi);
  rotate_y_all(psi, n, constants::pi / 2.0);

  double jz = 0.0;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const int down = std::popcount(static_cast<std::uint64_t>(idx));
    jz += std::norm(psi[idx]) * 0.5 * (n - 2 * down);
  }
  return {jz, 0.5 + jz / n};
}

BruteForceResult brute_force_sequence(int spins, double chi, double tau_arm, double theta_1) {
  if (spins < 1) throw ArityError("need at least one spin");
  if (spins > kBruteForceMaxSpins) {
    throw CapacityError("brute-force state vector limited to " +
                        std::to_string(kBruteForceMaxSpins) + " spins");
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Constant(spins, spins, chi);
  j.diagonal().setZero();
  return brute_force_sequence(j, tau_arm, theta_1);
}

double mf_validity_bound(int spins, double chi, double t) {
  if (spins < 1) throw ArityError("need at least one spin");
  return chi * t / (std::sqrt(static_cast<double>(spins)) / 4.0);
}

SpinMotionReport spin_motion_criterion(const ModeSpectrum& spectrum, const ODFDrive& drive,
                                       double temperature, bool composite_sqrt_n) {
  if (!(temperature > 0)) throw ConfigurationError("temperature must be positive");
  const Eigen::Index n = spectrum.size();
  if (n == 0) throw ArityError("empty mode spectrum");

  SpinMotionReport report;
  report.margins.resize(static_cast<std::size_t>(n));
  report.force_free = drive.force == 0.0;
  const double extra = composite_sqrt_n ? std::sqrt(static_cast<double>(n)) : 1.0;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.worst_mode = 1;
  for (Eigen::Index m = 0; m < n; ++m) {
    const double w = spectrum.frequencies(m);
    if (!(w > 0)) throw InstabilityError(1, "mode without positive frequency");
    double margin = std::numeric_limits<double>::infinity();
    if (!report.force_free) {
      const double nbar = constants::boltzmann * temperature / (constants::hbar * w);
      const double z = std::sqrt(constants::hbar * (2.0 * nbar + 1.0) / (2.0 * spectrum.ion_mass * w));
      margin = constants::hbar * std::abs(drive.beat_frequency - w) / (drive.force * z * extra);
    }
    report.margins[static_cast<std::size_t>(m)] = margin;
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.worst_mode = static_cast<int>(m + 1);
    }
  }
  report.satisfied = report.min_margin > 1.0;
  return report;
}

}  // namespace penning
