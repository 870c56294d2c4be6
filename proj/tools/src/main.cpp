// penning-sim: file-emitting front end for the crystal, mode, coupling and
// spin-precession models.

#include <cstdio>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "penning/tools/commands.hpp"
#include "penning/tools/validation.hpp"
#include "penning/version.hpp"

namespace {

using namespace penning::tools;

int validate(const RunOptions& run) {
  const auto results = run_acceptance({.threads = run.threads, .on_result = [](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
  }});
  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  int failed = 0;
  for (const auto& r : results) {
    failed += !r.passed;
    report.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail},
                      {"seconds", r.seconds}});
  }
  if (!run.output_directory.empty()) {
    std::filesystem::create_directories(run.output_directory);
    std::ofstream(run.output_directory / "validation.json") << report.dump(2) << "\n";
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penning-trap ion crystal and spin-coupling simulator"};
  app.set_version_flag("--version", penning::kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::filesystem::path> config_path;
  std::optional<std::filesystem::path> out_dir;
  int threads = 1;
  app.add_option("--config", config_path, "Scenario file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides [output] directory)");
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

  struct Sub {
    const char* name;
    const char* help;
    CommandOutput (*run)(const ScenarioConfig&, const RunOptions&);
  };
  const Sub subs[] = {
      {"crystal", "Equilibrium crystal: crystal.json, crystal.csv", cmd_crystal},
      {"modes", "Transverse modes: modes.csv, mode_vectors.json", cmd_modes},
      {"couplings", "Ising couplings at one detuning: pairs.csv, fit.json", cmd_couplings},
      {"sweep", "Mean coupling and power-law exponent vs detuning: sweep.csv", cmd_sweep},
      {"precess", "Mean-field vs exact echo precession: precession.csv", cmd_precess},
      {"calibrate", "Laser calibration report: calibration.json", cmd_calibrate},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help);
  app.add_subcommand("validate", "Run the reproduction acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    RunOptions run;
    run.threads = threads;
    if (out_dir) run.output_directory = *out_dir;

    if (app.got_subcommand("validate")) return validate(run);

    const ScenarioConfig config = config_path ? load_scenario(*config_path) : parse_scenario("");
    for (const auto& s : subs) {
      if (!app.got_subcommand(s.name)) continue;
      const CommandOutput out = s.run(config, run);
      for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << out.summary << std::endl;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << error_json(e) << std::endl;
    return 2;
  }
  return 0;
}
