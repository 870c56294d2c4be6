#include "fixtures.hpp"

#include <map>
#include <mutex>

namespace penning::testing {

const IonCrystal& default_crystal(int ions) {
  static std::mutex mutex;
  static std::map<int, IonCrystal> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(ions);
  if (it == cache.end()) {
    it = cache.emplace(ions, equilibrium_crystal(ions, TrapConfig::beryllium_default())).first;
  }
  return it->second;
}

const IonCrystal& benchmark_crystal() { return default_crystal(217); }

const ModeSpectrum& benchmark_spectrum() {
  static const ModeSpectrum spectrum = transverse_modes(benchmark_crystal());
  return spectrum;
}

}  // namespace penning::testing
