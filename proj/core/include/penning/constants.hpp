#pragma once

#include <numbers>

namespace penning::constants {

// CODATA 2018 exact / recommended values, SI.
inline constexpr double hbar = 1.054571817e-34;             // J s
inline constexpr double boltzmann = 1.380649e-23;           // J / K
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F / m
inline constexpr double elementary_charge = 1.602176634e-19;     // C
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
inline constexpr double electron_mass = 9.1093837015e-31;        // kg

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Coulomb constant k = 1 / (4 pi eps0).
inline constexpr double coulomb = 1.0 / (4.0 * pi * vacuum_permittivity);

/// Singly ionized beryllium-9: neutral atomic mass minus one electron.
inline constexpr double beryllium9_ion_mass = 9.012182 * atomic_mass_unit - electron_mass;

}  // namespace penning::constants
