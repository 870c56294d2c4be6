#include <benchmark/benchmark.h>

#include <map>

#include "penning/ising_coupling.hpp"
#include "penning/normal_modes.hpp"
#include "penning/odf_calibration.hpp"
#include "penning/spin_dynamics.hpp"
#include "penning/trap_crystal.hpp"

namespace {

using namespace penning;

const IonCrystal& crystal_for(int ions) {
  static std::map<int, IonCrystal> cache;
  auto it = cache.find(ions);
  if (it == cache.end()) it = cache.emplace(ions, equilibrium_crystal(ions, TrapConfig::beryllium_default())).first;
  return it->second;
}

void BM_Energy(benchmark::State& state) {
  const auto& c = crystal_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rotating_frame_energy(c.positions, c.trap));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Energy)->Arg(19)->Arg(127)->Arg(217)->Complexity(benchmark::oNSquared);

void BM_Gradient(benchmark::State& state) {
  const auto& c = crystal_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rotating_frame_gradient(c.positions, c.trap));
}
BENCHMARK(BM_Gradient)->Arg(19)->Arg(127)->Arg(217);

void BM_Equilibrium(benchmark::State& state) {
  const auto trap = TrapConfig::beryllium_default();
  for (auto _ : state) benchmark::DoNotOptimize(equilibrium_crystal(static_cast<int>(state.range(0)), trap));
}
BENCHMARK(BM_Equilibrium)->Arg(19)->Arg(127)->Arg(217)->Unit(benchmark::kMillisecond);

void BM_TransverseModes(benchmark::State& state) {
  const auto& c = crystal_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transverse_modes(c));
}
BENCHMARK(BM_TransverseModes)->Arg(127)->Arg(217)->Unit(benchmark::kMillisecond);

void BM_CouplingMatrix(benchmark::State& state) {
  const auto& c = crystal_for(217);
  const auto s = transverse_modes(c);
  const auto drive = make_drive(s.frequencies(0) + 2 * constants::pi * 4e3, 1.0, BeamGeometry{});
  for (auto _ : state) benchmark::DoNotOptimize(coupling_matrix(s, drive));
}
BENCHMARK(BM_CouplingMatrix)->Unit(benchmark::kMillisecond);

void BM_DickeSequence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_sequence_jz(n, 100.0, 1e-3, 0.7));
}
BENCHMARK(BM_DickeSequence)->Arg(10)->Arg(100)->Arg(217);

void BM_BruteForceSequence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_sequence(n, 100.0, 1e-3, 0.7));
}
BENCHMARK(BM_BruteForceSequence)->DenseRange(4, 12, 4);

}  // namespace

BENCHMARK_MAIN();
