#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "penning/constants.hpp"
#include "penning/ising_coupling.hpp"
#include "penning/normal_modes.hpp"
#include "penning/units.hpp"

namespace penning {
namespace {

TrapConfig wall_free() {
  auto t = TrapConfig::beryllium_default();
  t.wall_strength = 0.0;
  return t;
}

TEST(TransverseModes, SingleIonIsAxialFrequency) {
  const auto& c = testing::default_crystal(1);
  const auto s = transverse_modes(c);
  ASSERT_EQ(s.size(), 1);
  EXPECT_NEAR(s.frequencies(0), c.trap.axial_frequency, 1e-9 * c.trap.axial_frequency);
  EXPECT_DOUBLE_EQ(s.modes(0, 0), 1.0);
}

TEST(TransverseModes, TwoIonsHaveComAndTilt) {
  const auto trap = wall_free();
  const auto c = minimize_equilibrium({{-15e-6, 0.0}, {15e-6, 0.0}}, trap);
  const auto s = transverse_modes(c);
  const double w1 = trap.axial_frequency;
  EXPECT_NEAR(s.frequencies(0), w1, 1e-12 * w1);
  const double tilt = w1 * std::sqrt(1.0 - trap.beta());
  EXPECT_NEAR(s.frequencies(1), tilt, 1e-8 * w1);
  // 40-digit evaluation of omega_1 sqrt(1 - beta) for the default trap.
  EXPECT_NEAR(s.frequencies(1) / constants::two_pi, 776889.642375084682, 1e-3);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(s.modes(0, 0), r, 1e-12);
  EXPECT_NEAR(s.modes(1, 0), r, 1e-12);
  EXPECT_NEAR(std::abs(s.modes(0, 1)), r, 1e-12);
  EXPECT_NEAR(s.modes(0, 1), -s.modes(1, 1), 1e-12);
}

TEST(StiffnessMatrix, RowsSumToAxialStiffness) {
  const auto& c = testing::default_crystal(19);
  const auto K = stiffness_matrix(c);
  const double k1 = c.trap.axial_stiffness();
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    EXPECT_NEAR(K.row(i).sum(), k1, 1e-12 * k1) << i;
    for (Eigen::Index j = 0; j < K.cols(); ++j) {
      EXPECT_EQ(K(i, j), K(j, i));
      if (i != j) EXPECT_GT(K(i, j), 0.0);
    }
  }
}

TEST(TransverseModes, ComModeIsUniformAndHighest) {
  for (int n : {7, 19, 127}) {
    const auto& c = testing::default_crystal(n);
    const auto s = transverse_modes(c);
    const double w1 = c.trap.axial_frequency;
    EXPECT_NEAR(s.frequencies(0), w1, 1e-9 * w1) << n;
    const double u = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < s.size(); ++i) EXPECT_NEAR(s.modes(i, 0), u, 1e-8) << n;
    for (Eigen::Index m = 1; m < s.size(); ++m) {
      EXPECT_LE(s.frequencies(m), s.frequencies(m - 1));
      EXPECT_GT(s.frequencies(m), 0.0);
    }
  }
}

TEST(TransverseModes, ReconstructsStiffnessAndIsOrthonormal) {
  const auto& c = testing::default_crystal(19);
  const Eigen::MatrixXd K = stiffness_matrix(c) / c.trap.ion_mass;
  const auto s = transverse_modes(c);
  const Eigen::MatrixXd w2 = s.frequencies.array().square().matrix().asDiagonal();
  const Eigen::MatrixXd rebuilt = s.modes * w2 * s.modes.transpose();
  EXPECT_LT((rebuilt - K).norm(), 1e-10 * K.norm());
  const auto n = s.size();
  EXPECT_LT((s.modes.transpose() * s.modes - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-12);
}

TEST(TransverseModes, SignConventionMakesLargestEntryPositive) {
  const auto s = transverse_modes(testing::default_crystal(19));
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    Eigen::Index k = 0;
    s.modes.col(m).cwiseAbs().maxCoeff(&k);
    EXPECT_GT(s.modes(k, m), 0.0) << m;
  }
}

TEST(TransverseModes, AgreesWithJacobiOracle) {
  const auto& c = testing::default_crystal(19);
  const Eigen::MatrixXd K = stiffness_matrix(c) / c.trap.ion_mass;
  const auto oracle_result = oracle::jacobi_eigen(K);
  const auto s = transverse_modes(c);
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    EXPECT_NEAR(s.frequencies(m) * s.frequencies(m), oracle_result.values(m),
                1e-10 * oracle_result.values(0));
  }

  // Eigenvectors of degenerate pairs are basis-dependent; couplings are not.
  ODFDrive drive{c.trap.axial_frequency + khz(20.0), 1e-22, 0.0, 0.0};
  const auto J = coupling_matrix(s, drive).J;
  const double n = static_cast<double>(s.size());
  const double scale = drive.force * drive.force * n / (2.0 * constants::hbar * c.trap.ion_mass);
  Eigen::MatrixXd J_oracle = Eigen::MatrixXd::Zero(s.size(), s.size());
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    const double denom = drive.beat_frequency * drive.beat_frequency - oracle_result.values(m);
    J_oracle += oracle_result.vectors.col(m) * oracle_result.vectors.col(m).transpose() / denom;
  }
  J_oracle *= scale;
  J_oracle.diagonal().setZero();
  EXPECT_LT((J - J_oracle).cwiseAbs().maxCoeff(), 1e-9 * J_oracle.cwiseAbs().maxCoeff());
}

TEST(TransverseModes, NegativeStiffnessIsUnstable) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4, 4);
  K.diagonal() << 1.0, -2.0, 3.0, -0.5;
  try {
    transverse_modes(K, 1.0);
    FAIL() << "expected InstabilityError";
  } catch (const InstabilityError& e) {
    EXPECT_EQ(e.unstable_modes(), 2);
  }
  const auto ev = transverse_eigenvalues(K, 2.0);
  EXPECT_DOUBLE_EQ(ev(0), 1.5);
  EXPECT_DOUBLE_EQ(ev(3), -1.0);
}

TEST(TransverseModes, OverRotatedCrystalIsUnstable) {
  auto trap = TrapConfig::beryllium_default();
  trap.rotation_frequency = khz(52.0);
  const auto c = equilibrium_crystal(127, trap);
  EXPECT_THROW(transverse_modes(c), InstabilityError);
}

TEST(PlaneTransitionScan, TwoIonsHaveNoCrossingInRealisticRange) {
  EXPECT_THROW(plane_transition_scan(2, TrapConfig::beryllium_default(), khz(44.0), khz(60.0)),
               BracketError);
}

TEST(PlaneTransitionScan, SmallCrystalsNeedFasterRotation) {
  const auto trap = TrapConfig::beryllium_default();
  const auto small = plane_transition_scan(19, trap, khz(44.0), khz(70.0));
  const auto big = plane_transition_scan(217, trap, khz(44.0), khz(48.0));
  EXPECT_LT(small.lower, small.upper);
  EXPECT_LE(small.upper - small.lower, PlaneScanOptions{}.tolerance);
  EXPECT_GT(small.rotation_frequency, khz(50.0));
  EXPECT_LT(small.rotation_frequency, khz(60.0));
  EXPECT_GT(small.rotation_frequency, big.rotation_frequency);
  EXPECT_NEAR(big.rotation_frequency, khz(46.1), 0.05 * khz(46.1));
}

TEST(BenchmarkSpectrum, LowestModeInBand) {
  const auto& s = testing::benchmark_spectrum();
  ASSERT_EQ(s.size(), 217);
  const double lowest = s.frequencies(s.size() - 1);
  EXPECT_GT(lowest, khz(190.0));
  EXPECT_LT(lowest, khz(235.0));
}

}  // namespace
}  // namespace penning
