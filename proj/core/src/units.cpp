#include "penning/units.hpp"

#include <array>
#include <charconv>
#include <string>

#include "penning/constants.hpp"
#include "penning/errors.hpp"

namespace penning {

namespace {

struct UnitEntry {
  Dimension dim;
  std::string_view symbol;
  double scale;
};

constexpr double kTwoPi = constants::two_pi;

constexpr std::array kUnits{
    UnitEntry{Dimension::frequency, "Hz", kTwoPi},
    UnitEntry{Dimension::frequency, "kHz", kTwoPi * 1e3},
    UnitEntry{Dimension::frequency, "MHz", kTwoPi * 1e6},
    UnitEntry{Dimension::angular_rate, "rad_per_s", 1.0},
    UnitEntry{Dimension::angular_rate, "per_s", 1.0},
    UnitEntry{Dimension::angle, "deg", constants::pi / 180.0},
    UnitEntry{Dimension::angle, "rad", 1.0},
    UnitEntry{Dimension::intensity, "W_per_cm2", 1.0},
    UnitEntry{Dimension::intensity, "W_per_m2", 1e-4},
    UnitEntry{Dimension::temperature, "K", 1.0},
    UnitEntry{Dimension::temperature, "mK", 1e-3},
    UnitEntry{Dimension::temperature, "uK", 1e-6},
    UnitEntry{Dimension::time, "s", 1.0},
    UnitEntry{Dimension::time, "ms", 1e-3},
    UnitEntry{Dimension::time, "us", 1e-6},
    UnitEntry{Dimension::length, "m", 1.0},
    UnitEntry{Dimension::length, "mm", 1e-3},
    UnitEntry{Dimension::length, "um", 1e-6},
    UnitEntry{Dimension::length, "nm", 1e-9},
    UnitEntry{Dimension::magnetic_field, "T", 1.0},
    UnitEntry{Dimension::mass, "kg", 1.0},
    UnitEntry{Dimension::mass, "u", constants::atomic_mass_unit},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::frequency: return "frequency";
    case Dimension::angular_rate: return "rate";
    case Dimension::angle: return "angle";
    case Dimension::intensity: return "intensity";
    case Dimension::temperature: return "temperature";
    case Dimension::time: return "time";
    case Dimension::length: return "length";
    case Dimension::magnetic_field: return "magnetic field";
    case Dimension::mass: return "mass";
  }
  return "unknown";
}

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{}) {
    throw ParseError("expected a number in '" + std::string(text) + "'");
  }
  const std::string_view unit = trim(s.substr(static_cast<std::size_t>(res.ptr - s.data())));

  if (dim == Dimension::dimensionless) {
    if (!unit.empty()) {
      throw ParseError("'" + std::string(text) + "' must be dimensionless");
    }
    return value;
  }
  if (unit.empty()) {
    throw ParseError("'" + std::string(text) + "' needs a " + std::string(dimension_name(dim)) +
                     " unit");
  }
  for (const auto& u : kUnits) {
    if (u.dim == dim && u.symbol == unit) return value * u.scale;
  }
  throw ParseError("unit '" + std::string(unit) + "' is not a " +
                   std::string(dimension_name(dim)) + " unit");
}

}  // namespace penning
