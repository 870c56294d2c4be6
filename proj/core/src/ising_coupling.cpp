#include "penning/ising_coupling.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "penning/constants.hpp"

namespace penning {

namespace {

void check_resonance(const Eigen::VectorXd& omegas, double mu, double guard) {
  for (Eigen::Index m = 0; m < omegas.size(); ++m) {
    if (std::abs(mu - omegas(m)) < guard) {
      throw ResonanceError(static_cast<int>(m + 1),
                           "beat note within the resonance guard of mode " + std::to_string(m + 1) +
                               " (" + std::to_string(omegas(m) / constants::two_pi) + " Hz)");
    }
  }
}

}  // namespace

CouplingMatrix coupling_matrix(const ModeSpectrum& spectrum, const ODFDrive& drive,
                               double resonance_guard) {
  const Eigen::Index n = spectrum.size();
  if (n == 0) throw ArityError("empty mode spectrum");
  if (!(drive.beat_frequency > 0)) throw ConfigurationError("beat frequency must be positive");
  if (!(drive.force >= 0)) throw ConfigurationError("ODF force must be non-negative");
  const double mu = drive.beat_frequency;
  check_resonance(spectrum.frequencies, mu, resonance_guard);

  const double prefactor = drive.force * drive.force * static_cast<double>(n) /
                           (2.0 * constants::hbar * spectrum.ion_mass);
  Eigen::VectorXd inv(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double w = spectrum.frequencies(m);
    inv(m) = 1.0 / ((mu - w) * (mu + w));
  }
  Eigen::MatrixXd j = prefactor * (spectrum.modes * inv.asDiagonal() * spectrum.modes.transpose());
  j = 0.5 * (j + j.transpose()).eval();
  j.diagonal().setZero();

  CouplingMatrix out;
  out.J = std::move(j);
  out.drive = drive;
  out.spectrum = std::make_shared<const ModeSpectrum>(spectrum);
  return out;
}

double mean_coupling(const Eigen::MatrixXd& J) {
  const Eigen::Index n = J.rows();
  if (n < 2) throw ArityError("mean_coupling needs at least two spins");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) sum += J(i, j);
    }
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n));
}

double uniform_limit_chi(const ODFDrive& drive, double omega_1, double ion_mass,
                         double resonance_guard) {
  const double mu = drive.beat_frequency;
  if (std::abs(mu - omega_1) < resonance_guard) {
    throw ResonanceError(1, "beat note within the resonance guard of the COM mode");
  }
  return drive.force * drive.force / (2.0 * constants::hbar * ion_mass) /
         ((mu - omega_1) * (mu + omega_1));
}

PowerLawFit power_law_fit(const Eigen::MatrixXd& J, const IonCrystal& crystal,
                          const PowerLawFitOptions& options) {
  const auto& pos = crystal.positions;
  const std::size_t n = pos.size();
  if (static_cast<std::size_t>(J.rows()) != n || J.rows() != J.cols()) {
    throw ArityError("coupling matrix and crystal sizes differ");
  }
  if (n < 7) throw ArityError("power_law_fit needs at least 7 ions");
  if (!(options.bin_ratio > 1)) throw ConfigurationError("bin ratio must exceed 1");

  const double d0 = nearest_neighbor_spacing(crystal);
  const double d_max = options.max_radius_fraction * crystal_radius(crystal);
  const double log_ratio = std::log(options.bin_ratio);

  struct Acc {
    double d = 0.0, j = 0.0;
    int count = 0;
  };
  std::vector<Acc> acc;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double d = std::hypot(pos[i].x - pos[k].x, pos[i].y - pos[k].y);
      if (d < d0 || d > d_max) continue;
      const auto bin = static_cast<std::size_t>(std::floor(std::log(d / d0) / log_ratio));
      if (bin >= acc.size()) acc.resize(bin + 1);
      acc[bin].d += d;
      acc[bin].j += J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      ++acc[bin].count;
    }
  }

  PowerLawFit fit;
  fit.reference_spacing = d0;
  int positive = 0;
  int negative = 0;
  for (const auto& a : acc) {
    if (a.count == 0) continue;
    const PowerLawFit::Bin b{a.d / a.count, a.j / a.count, a.count};
    if (b.coupling > 0) {
      ++positive;
    } else {
      ++negative;
    }
    fit.bins.push_back(b);
  }
  if (static_cast<int>(fit.bins.size()) < options.min_bins) {
    throw FitError("insufficient_bins", "only " + std::to_string(fit.bins.size()) +
                                            " populated distance bins, need " +
                                            std::to_string(options.min_bins));
  }
  if (positive > 0 && negative > 0) {
    throw FitError("sign_mixed",
                   "bin-mean couplings change sign inside the fit range; no power law");
  }
  fit.sign = positive > 0 ? 1 : -1;

  // Ordinary least squares on (log(d/d0), log|J|).
  const double m = static_cast<double>(fit.bins.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& b : fit.bins) {
    const double x = std::log(b.distance / d0);
    const double y = std::log(std::abs(b.coupling));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double ss = 0.0;
  for (const auto& b : fit.bins) {
    const double r = std::log(std::abs(b.coupling)) - (intercept + slope * std::log(b.distance / d0));
    ss += r * r;
  }
  fit.exponent = -slope;
  fit.prefactor = std::exp(intercept);
  fit.rms_residual = std::sqrt(ss / m);
  return fit;
}

std::vector<SweepRow> detuning_sweep(const ModeSpectrum& spectrum, const IonCrystal& crystal,
                                     const ODFDrive& drive_template,
                                     std::span<const double> detunings, int threads,
                                     double resonance_guard) {
  if (spectrum.size() == 0) throw ArityError("empty mode spectrum");
  const double omega_1 = spectrum.frequencies(0);
  const double i2 = drive_template.intensity * drive_template.intensity;

  std::vector<SweepRow> rows(detunings.size());
  std::vector<std::exception_ptr> errors(detunings.size());

  auto work = [&](std::size_t idx) {
    try {
      ODFDrive drive = drive_template;
      drive.beat_frequency = omega_1 + detunings[idx];
      const auto c = coupling_matrix(spectrum, drive, resonance_guard);
      SweepRow row;
      row.detuning = detunings[idx];
      row.mean_coupling = mean_coupling(c.J);
      row.mean_coupling_per_intensity2 = i2 > 0 ? row.mean_coupling / i2 : 0.0;
      try {
        row.fit = power_law_fit(c.J, crystal);
      } catch (const FitError&) {
        row.fit.reset();
      }
      rows[idx] = std::move(row);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)),
                                                      detunings.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < detunings.size(); ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < detunings.size(); i += workers) work(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace penning
