#pragma once

#include <string>
#include <string_view>

#include "penning/constants.hpp"

namespace penning {

// Angular frequency from an ordinary frequency.
constexpr double hz(double f) { return constants::two_pi * f; }
constexpr double khz(double f) { return constants::two_pi * 1e3 * f; }
constexpr double mhz(double f) { return constants::two_pi * 1e6 * f; }
constexpr double degrees(double deg) { return deg * constants::pi / 180.0; }
constexpr double to_degrees(double rad) { return rad * 180.0 / constants::pi; }

/// Physical dimension a scenario value must carry.
enum class Dimension {
  dimensionless,
  frequency,       // Hz, kHz, MHz; converted to angular rad/s
  angular_rate,    // rad_per_s, per_s
  angle,           // deg, rad
  intensity,       // W_per_cm2, W_per_m2; stored in W/cm^2
  temperature,     // K, mK, uK
  time,            // s, ms, us
  length,          // m, mm, um, nm
  magnetic_field,  // T
  mass,            // kg, u
};

/// Parses "<number> <unit>" into SI (angular frequencies in rad/s,
/// intensities in W/cm^2). Dimensionless values must carry no unit;
/// every other dimension requires one. Throws ParseError.
double parse_quantity(std::string_view text, Dimension dim);

std::string_view dimension_name(Dimension dim);

}  // namespace penning
