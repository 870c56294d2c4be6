#include "penning/odf_calibration.hpp"

#include <cmath>
#include <string>

#include "penning/constants.hpp"

namespace penning {

void BeamGeometry::validate() const {
  if (!(wavelength > 0)) throw ConfigurationError("wavelength must be positive");
  // pi itself is the counter-propagating limit.
  if (!(beam_angle > 0 && beam_angle <= constants::pi)) {
    throw ConfigurationError("beam angle must lie in (0, pi]");
  }
}

double delta_k(const BeamGeometry& geometry) {
  geometry.validate();
  return 2.0 * (constants::two_pi / geometry.wavelength) * std::sin(0.5 * geometry.beam_angle);
}

double lattice_wavelength(const BeamGeometry& geometry) {
  return constants::two_pi / delta_k(geometry);
}

double f0_from_intensity(double intensity_w_per_cm2, const BeamGeometry& geometry) {
  if (!(intensity_w_per_cm2 >= 0)) throw ConfigurationError("intensity must be non-negative");
  geometry.validate();
  return calibration::kReferenceForce * intensity_w_per_cm2 * std::sin(0.5 * geometry.beam_angle) /
         std::sin(0.5 * calibration::kReferenceBeamAngle);
}

double gamma_from_intensity(double intensity_w_per_cm2) {
  if (!(intensity_w_per_cm2 >= 0)) throw ConfigurationError("intensity must be non-negative");
  return calibration::kReferenceDecoherence * intensity_w_per_cm2;
}

ODFDrive make_drive(double beat_frequency, double intensity_w_per_cm2,
                    const BeamGeometry& geometry) {
  return ODFDrive{
      .beat_frequency = beat_frequency,
      .force = f0_from_intensity(intensity_w_per_cm2, geometry),
      .intensity = intensity_w_per_cm2,
      .beam_angle = geometry.beam_angle,
  };
}

double stark_shift(double polarization, const StarkCoefficients& c) {
  const double cs = std::cos(polarization);
  const double sn = std::sin(polarization);
  return (c.a_up - c.a_down) * cs * cs + (c.b_up - c.b_down) * sn * sn;
}

std::optional<double> stark_null_angle(const StarkCoefficients& c) {
  const double da = c.a_up - c.a_down;
  const double db = c.b_up - c.b_down;
  if (!(da * db < 0)) return std::nullopt;
  return std::atan(std::sqrt(-da / db));
}

std::vector<double> z_rms_profile(const ModeSpectrum& spectrum, double temperature) {
  if (!(temperature >= 0)) throw ConfigurationError("temperature must be non-negative");
  const Eigen::Index n = spectrum.size();
  for (Eigen::Index m = 0; m < n; ++m) {
    if (!(spectrum.frequencies(m) > 0)) {
      throw InstabilityError(1, "mode " + std::to_string(m + 1) + " has no positive frequency");
    }
  }
  // Per-mode variance of the normal coordinate.
  Eigen::VectorXd variance(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double w = spectrum.frequencies(m);
    const double nbar = constants::boltzmann * temperature / (constants::hbar * w);
    variance(m) = constants::hbar / (2.0 * spectrum.ion_mass * w) * (2.0 * nbar + 1.0);
  }
  std::vector<double> z(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    z[static_cast<std::size_t>(i)] =
        std::sqrt(spectrum.modes.row(i).cwiseAbs2().dot(variance));
  }
  return z;
}

double lamb_dicke_parameter(double z_rms, const BeamGeometry& geometry) {
  if (!(z_rms >= 0)) throw ConfigurationError("z_rms must be non-negative");
  return delta_k(geometry) * z_rms;
}

double tilt_modulation_index(const BeamGeometry& geometry, double array_radius) {
  if (!(array_radius > 0)) throw ConfigurationError("array radius must be positive");
  return delta_k(geometry) * 2.0 * array_radius * std::sin(geometry.misalignment);
}

}  // namespace penning
