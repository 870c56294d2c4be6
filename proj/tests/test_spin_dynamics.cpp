#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "penning/constants.hpp"
#include "penning/odf_calibration.hpp"
#include "penning/spin_dynamics.hpp"
#include "penning/units.hpp"

namespace penning {
namespace {

using constants::pi;
using cd = std::complex<double>;

SequenceParams mf(double theta, double jbar_t, double gamma = 0.0) {
  SequenceParams p;
  p.theta_1 = theta;
  p.tau_arm = 1e-3;
  p.mean_coupling = jbar_t / (2.0 * p.tau_arm);
  p.decoherence = gamma;
  return p;
}

TEST(MfPrecession, ReferenceValues) {
  EXPECT_DOUBLE_EQ(mf_precession_probability(mf(0.0, 0.7)), 0.5);
  EXPECT_NEAR(mf_precession_probability(mf(pi / 2, 0.7)), 0.5, 1e-16);
  const double expected = 0.5 * (1.0 + std::sqrt(0.5) * std::sin(std::sqrt(0.5)));
  EXPECT_NEAR(mf_precession_probability(mf(pi / 4, 0.5)), expected, 1e-15);
  EXPECT_NEAR(mf_precession_probability(mf(pi / 4, 0.5)), 0.72968, 5e-6);
}

TEST(MfPrecession, SymmetryPeriodicityAndDecay) {
  for (double th = -3.0; th <= 3.0; th += 0.37) {
    const double p = mf_precession_probability(mf(th, 0.9));
    EXPECT_NEAR(mf_precession_probability(mf(-th, 0.9)), 1.0 - p, 1e-15);
    EXPECT_NEAR(mf_precession_probability(mf(th + 2 * pi, 0.9)), p, 1e-12);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
  auto p = mf(pi / 3, 0.9, 50.0);
  const double damped = mf_precession_probability(p) - 0.5;
  p.decoherence = 0.0;
  EXPECT_NEAR(damped, std::exp(-50.0 * 2e-3) * (mf_precession_probability(p) - 0.5), 1e-15);
}

TEST(SequenceParams, Validation) {
  auto p = mf(0.3, 0.1);
  p.tau_arm = -1.0;
  EXPECT_THROW(mf_precession_probability(p), ConfigurationError);
  p = mf(0.3, 0.1, -1.0);
  EXPECT_THROW(mf_precession_probability(p), ConfigurationError);
  p = mf(0.3, 0.1);
  p.spins = 0;
  EXPECT_THROW(mf_precession_probability(p), ArityError);
}

TEST(DickeRotation, ZeroAngleIsIdentity) {
  const auto s = dicke_rotation(DickeState::all_up(6), Axis::x, 1.1);
  for (Axis a : {Axis::x, Axis::y}) {
    const auto r = dicke_rotation(s, a, 0.0);
    EXPECT_LT((r.amplitudes - s.amplitudes).norm(), 1e-14);
  }
}

TEST(DickeRotation, SingleSpinFlip) {
  const auto r = dicke_rotation(DickeState::all_up(1), Axis::x, pi);
  EXPECT_NEAR(std::norm(r.amplitudes(0)), 1.0, 1e-15);
  EXPECT_NEAR(std::norm(r.amplitudes(1)), 0.0, 1e-15);
  EXPECT_NEAR(r.expect_jz(), -0.5, 1e-15);
}

TEST(DickeRotation, CoherentStatePopulations) {
  for (double theta : {0.3, 1.2, 2.5}) {
    const auto r = dicke_rotation(DickeState::all_up(4), Axis::x, theta);
    const auto oracle_pop = oracle::coherent_state_populations(4, theta);
    for (int down = 0; down <= 4; ++down) {
      const double binomial = std::tgamma(5.0) / (std::tgamma(down + 1.0) * std::tgamma(5.0 - down)) *
                              std::pow(std::cos(theta / 2), 2 * (4 - down)) *
                              std::pow(std::sin(theta / 2), 2 * down);
      // k = 4 - down is M = 2 - down.
      EXPECT_NEAR(std::norm(r.amplitudes(4 - down)), oracle_pop[down], 1e-12);
      EXPECT_NEAR(oracle_pop[down], binomial, 1e-12);
    }
  }
}

TEST(DickeRotation, ExpectationValuesOfTippedState) {
  const int n = 7;
  const double th = 0.8;
  const auto x = dicke_rotation(DickeState::all_up(n), Axis::x, th);
  EXPECT_NEAR(x.expect_jz(), 0.5 * n * std::cos(th), 1e-12);
  EXPECT_NEAR(x.expect_jy(), -0.5 * n * std::sin(th), 1e-12);
  EXPECT_NEAR(x.expect_jx(), 0.0, 1e-12);
  const auto y = dicke_rotation(DickeState::all_up(n), Axis::y, th);
  EXPECT_NEAR(y.expect_jx(), 0.5 * n * std::sin(th), 1e-12);
  EXPECT_NEAR(y.expect_jy(), 0.0, 1e-12);
}

TEST(DickeJz2Phase, TrivialCases) {
  const auto s = dicke_rotation(DickeState::all_up(5), Axis::x, 0.9);
  EXPECT_LT((dicke_jz2_phase(s, 3.0, 0.0).amplitudes - s.amplitudes).norm(), 1e-15);

  const auto one = dicke_rotation(DickeState::all_up(1), Axis::x, 0.9);
  const auto ph = dicke_jz2_phase(one, 2.0, 0.4);
  // Same phase on both levels: only a global phase.
  const cd ratio0 = ph.amplitudes(0) / one.amplitudes(0);
  const cd ratio1 = ph.amplitudes(1) / one.amplitudes(1);
  EXPECT_NEAR(std::abs(ratio0 - ratio1), 0.0, 1e-15);
}

// Product-state evolution under (2 chi / N) Jz^2 in the full 2^N space.
double brute_force_jy_after_twist(int n, double theta, double chi_t) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<cd> psi(dim);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    cd amp = 1.0;
    double mz = 0.0;
    for (int q = 0; q < n; ++q) {
      const bool down = (idx >> q) & 1u;
      amp *= down ? cd(0.0, -s) : cd(c, 0.0);
      mz += down ? -0.5 : 0.5;
    }
    psi[idx] = amp * std::exp(cd(0.0, -2.0 * chi_t / n * mz * mz));
  }
  double jy = 0.0;
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t idx = 0; idx < dim; ++idx) {
      if (idx & bit) continue;
      jy += (std::conj(psi[idx]) * psi[idx | bit]).imag();  // <sigma_y>/2 contributions
    }
  }
  return jy;
}

TEST(DickeJz2Phase, ThreeSpinTwistMatchesStateVector) {
  const double theta = 1.1, chi_t = 0.7;
  auto s = dicke_rotation(DickeState::all_up(3), Axis::x, theta);
  s = dicke_jz2_phase(s, chi_t, 1.0);
  EXPECT_NEAR(s.expect_jy(), brute_force_jy_after_twist(3, theta, chi_t), 1e-10);
}

TEST(DickeState, UnitarityThroughLongSequence) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  auto s = DickeState::all_up(40);
  for (int i = 0; i < 200; ++i) {
    s = dicke_rotation(s, i % 2 ? Axis::x : Axis::y, u(rng));
    s = dicke_jz2_phase(s, u(rng), 0.5);
  }
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
}

TEST(DickeState, RejectsWrongDimension) {
  DickeState bad;
  bad.spins = 3;
  bad.amplitudes = Eigen::VectorXcd::Zero(7);
  EXPECT_THROW(dicke_rotation(bad, Axis::x, 1.0), ArityError);
  EXPECT_THROW(DickeState::all_up(0), ArityError);
}

TEST(ExactSequence, EchoClosesWithoutCoupling) {
  for (int n : {1, 2, 9}) {
    for (double th = 0.0; th <= 2 * pi; th += 0.25) {
      EXPECT_NEAR(exact_sequence_jz(n, 0.0, 1e-3, th), 0.0, 1e-12) << n << " " << th;
    }
  }
  EXPECT_NEAR(brute_force_sequence(2, 0.0, 1e-3, 0.7).jz, 0.0, 1e-12);
}

TEST(ExactSequence, AntisymmetricAboutHalfPi) {
  const int n = 20;
  const double chi = 300.0, tau = 1e-3;
  for (double d = 0.05; d < pi / 2; d += 0.2) {
    EXPECT_NEAR(exact_sequence_jz(n, chi, tau, pi / 2 + d), -exact_sequence_jz(n, chi, tau, pi / 2 - d),
                1e-10);
  }
}

TEST(ExactSequence, DecoherenceEnvelope) {
  const double a = exact_sequence_jz(10, 200.0, 1e-3, 0.8);
  EXPECT_NEAR(exact_sequence_jz(10, 200.0, 1e-3, 0.8, 80.0), a * std::exp(-0.16), 1e-13);
  EXPECT_THROW(exact_sequence_jz(10, 200.0, -1e-3, 0.8), ConfigurationError);
}

TEST(ExactSequence, AgreesWithBruteForceForUniformCoupling) {
  for (int n = 2; n <= 8; ++n) {
    for (double th : {0.2, 0.9, 1.7, 2.8, 4.0}) {
      const double chi = 250.0, tau = 1.3e-3;
      EXPECT_NEAR(exact_sequence_jz(n, chi, tau, th), brute_force_sequence(n, chi, tau, th).jz, 1e-10)
          << n << " " << th;
    }
  }
}

TEST(ExactSequence, MatchesMeanFieldForLargeN) {
  // J-bar of a uniform coupling is chi (N - 1) / N.
  auto max_gap = [](int n, double chi_t) {
    const double tau = 1e-3;
    const double chi = chi_t / (2.0 * tau);
    double gap = 0.0;
    for (int k = 0; k <= 60; ++k) {
      const double th = pi * k / 60.0;
      SequenceParams p;
      p.theta_1 = th;
      p.tau_arm = tau;
      p.mean_coupling = chi * (n - 1) / n;
      p.spins = n;
      const double mf_contrast = 2.0 * mf_precession_probability(p) - 1.0;
      gap = std::max(gap, std::abs(2.0 * exact_sequence_jz(n, chi, tau, th) / n - mf_contrast));
    }
    return gap;
  };
  EXPECT_LT(max_gap(100, 0.2), 0.01);
  EXPECT_LT(max_gap(100, 0.8), 0.02);
  EXPECT_GT(max_gap(5, 0.2), 0.0);
  EXPECT_LT(max_gap(5, 0.2), 0.05);
  EXPECT_GT(max_gap(5, 1.6), 0.2);
  EXPECT_LT(max_gap(200, 1.6), max_gap(50, 1.6));
}

TEST(BruteForce, SingleSpinHasNoTwist) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(1, 1);
  for (double th : {0.0, 0.4, 1.3, 2.9}) {
    const auto r = brute_force_sequence(j, 1e-3, th);
    SequenceParams p;
    p.theta_1 = th;
    p.tau_arm = 1e-3;
    EXPECT_NEAR(r.p_up, mf_precession_probability(p), 1e-14);
  }
}

TEST(BruteForce, RandomCouplingsStayNearMeanField) {
  const int n = 8;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(50.0, 150.0);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) J(i, k) = J(k, i) = u(rng);
  const double tau = 1e-3;
  SequenceParams p;
  p.tau_arm = tau;
  p.mean_coupling = mean_coupling(J);
  p.spins = n;
  ASSERT_LT(p.mean_coupling * 2 * tau, 0.2);
  for (double th = 0.1; th < pi; th += 0.3) {
    p.theta_1 = th;
    const auto r = brute_force_sequence(J, tau, th);
    EXPECT_NEAR(r.p_up, mf_precession_probability(p), 1.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_NEAR(r.p_up, 0.5 + r.jz / n, 1e-15);
  }
}

TEST(BruteForce, CapacityLimit) {
  EXPECT_THROW(brute_force_sequence(13, 1.0, 1e-3, 0.5), CapacityError);
  EXPECT_THROW(brute_force_sequence(Eigen::MatrixXd::Zero(13, 13), 1e-3, 0.5), CapacityError);
  EXPECT_NO_THROW(brute_force_sequence(kBruteForceMaxSpins, 1.0, 1e-3, 0.5));
}

TEST(MfValidityBound, ReferenceValues) {
  EXPECT_EQ(mf_validity_bound(50, 123.0, 0.0), 0.0);
  EXPECT_NEAR(mf_validity_bound(100, 0.2, 1.0), 0.08, 1e-15);
  EXPECT_NEAR(mf_validity_bound(5, 1.6, 1.0), 2.86, 5e-3);
}

ODFDrive high_detuning_drive(const ModeSpectrum& s, double intensity = 12.5) {
  BeamGeometry g;
  g.beam_angle = degrees(35.0);
  return make_drive(s.frequencies(0) + khz(100.0), intensity, g);
}

TEST(SpinMotionCriterion, ForceFreeIsSentinel) {
  const auto& s = testing::benchmark_spectrum();
  ODFDrive d{s.frequencies(0) + khz(10.0), 0.0, 0.0, 0.0};
  const auto r = spin_motion_criterion(s, d, 1e-3);
  EXPECT_TRUE(r.force_free);
  EXPECT_TRUE(std::isinf(r.min_margin));
  EXPECT_TRUE(r.satisfied);
  EXPECT_THROW(spin_motion_criterion(s, d, 0.0), ConfigurationError);
}

TEST(SpinMotionCriterion, MarginsScaleInverselyWithForce) {
  const auto& s = testing::benchmark_spectrum();
  const auto a = spin_motion_criterion(s, high_detuning_drive(s, 12.5), 1e-3);
  const auto b = spin_motion_criterion(s, high_detuning_drive(s, 25.0), 1e-3);
  for (std::size_t m = 0; m < a.margins.size(); ++m) EXPECT_NEAR(b.margins[m], 0.5 * a.margins[m], 1e-12 * a.margins[m]);
  const auto c = spin_motion_criterion(s, high_detuning_drive(s, 12.5), 1e-3, true);
  EXPECT_NEAR(c.min_margin, a.min_margin / std::sqrt(217.0), 1e-12);
}

TEST(SpinMotionCriterion, ComMarginAtOneMillikelvin) {
  const auto& s = testing::benchmark_spectrum();
  const auto drive = high_detuning_drive(s);
  const auto r = spin_motion_criterion(s, drive, 1e-3);
  ASSERT_EQ(r.worst_mode, 1);

  // Independent evaluation for the COM mode in long double.
  const long double hbar = constants::hbar, kb = constants::boltzmann;
  const long double w = s.frequencies(0), M = s.ion_mass;
  const long double nbar = kb * 1e-3L / (hbar * w);
  const long double z = std::sqrt(hbar * (2 * nbar + 1) / (2 * M * w));
  const long double margin = hbar * (2.0L * pi * 1e5L) / (static_cast<long double>(drive.force) * z);
  EXPECT_NEAR(r.margins[0], static_cast<double>(margin), 1e-9 * static_cast<double>(margin));
  EXPECT_NEAR(r.margins[0], 0.27, 0.02);
  EXPECT_FALSE(r.satisfied);

  // Zero-point motion alone leaves the constraint satisfied.
  const auto cold = spin_motion_criterion(s, drive, 1e-9);
  EXPECT_GT(cold.margins[0], 1.0);
}

}  // namespace
}  // namespace penning
