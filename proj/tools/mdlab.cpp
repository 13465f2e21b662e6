// mdlab <mode> --config <path> [--strict] [--resume <checkpoint>]
//
// Modes: simulate, resonance-scan, scattering-diagnose, identity-check.
// Thread count comes from MDLAB_THREADS only.

#include <iostream>

#include "CLI11.hpp"
#include "mdlab/run_modes.hpp"

int main(int argc, char** argv) {
  using namespace mdlab;
  CLI::App app{"Pseudospectral Maxwell-Dirac simulator and analysis harness"};
  std::string mode;
  std::string config;
  std::string resume;
  bool strict = false;
  app.add_option("mode", mode, "simulate | resonance-scan | scattering-diagnose | identity-check")
      ->required()
      ->check(CLI::IsMember({"simulate", "resonance-scan", "scattering-diagnose", "identity-check"}));
  app.add_option("--config", config, "Config file")->required();
  app.add_flag("--strict", strict, "Exit nonzero when an invariant check fails");
  app.add_option("--resume", resume, "Resume simulate from a checkpoint");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config, parse_mode(mode));
  } catch (const ConfigError& e) {
    std::cerr << "mdlab: " << config << ": " << e.what() << "\n";
    return exit_usage;
  }

  try {
    std::optional<std::filesystem::path> ck;
    if (!resume.empty()) ck = resume;
    const auto outcome = run_mode(cfg, ck, strict, [](const std::string& m) { std::cerr << m << "\n"; });
    std::cout << outcome.summary.dump(2) << "\n";
    for (const auto& f : outcome.failures) std::cerr << (strict ? "FAIL: " : "warning: ") << f << "\n";
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "mdlab: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "mdlab: " << e.what() << "\n";
    return exit_runtime;
  }
}
