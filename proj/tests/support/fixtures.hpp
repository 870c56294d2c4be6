#pragma once

#include "penning/ising_coupling.hpp"
#include "penning/normal_modes.hpp"
#include "penning/trap_crystal.hpp"

namespace penning::testing {

/// 217 ions, 795 kHz axial, 45.6 kHz rotation; computed once per process.
const IonCrystal& benchmark_crystal();
const ModeSpectrum& benchmark_spectrum();

/// Equilibrium for `ions` ions in the default trap, cached per ion count.
const IonCrystal& default_crystal(int ions);

}  // namespace penning::testing
