#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mdlab/evolution.hpp"
#include "mdlab/md_state.hpp"
#include "mdlab/resonance.hpp"
#include "mdlab/scattering.hpp"

namespace mdlab {

enum class Mode { simulate, resonance_scan, scattering_diagnose, identity_check };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct GridConfig {
  int n = 32;
  double L = 40.0;
  double mass = 1.0;
};

/// Initial data: one spinor packet plus optional real gauge packets on the
/// spatial components. Polarization "random" draws a unit spinor from the seed.
struct DataConfig {
  double amplitude = 0.01;
  double width = 2.0;
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 momentum{0.0, 0.0, 0.0};
  int branch = 1;
  std::string polarization = "up";  // up | random | four complex numbers
  double field_amplitude = 0.0;
  double field_width = 2.0;
  Vec3 field_wavevector{0.0, 0.0, 0.0};
};

struct ScanConfig {
  std::uint64_t samples = 100000;
  double min_radius = 1.0 / 1024.0;
  double max_radius = 1024.0;
  double compact_radius = 8.0;
  std::uint64_t approximation_samples = 200000;
  double approximation_xi_max = 8.0;
  double approximation_eta_max = 1.0;
};

struct ScatteringConfig {
  double t1 = 10.0;
  double t2 = 40.0;
  double maxwell_early_start = 5.0;
  double maxwell_early_end = 10.0;
  double maxwell_late_start = 20.0;
  double maxwell_late_end = 40.0;
  int k_lo = -3;
  int k_hi = 2;
  std::size_t top_modes = 10;
};

/// Fixtures for identity-check. The weight identities need more resolution
/// than the default simulation grid, so they run on their own grid.
struct IdentityConfig {
  std::uint64_t samples = 10000;  // random xi for the algebraic suite
  int n = 64;
  double L = 80.0;
  double width = 3.2;
  double t_wave = 1.0;
  double amplitude = 1e-3;  // coupled state
  std::uint64_t steps = 3;  // coupled steps before the weight identity
};

/// Thresholds used by --strict.
struct StrictConfig {
  double charge_drift = 1e-6;
  double lorenz = 1e-5;
  double algebra = 1e-12;
  double rotation = 1e-8;
  double radial = 1e-10;
  double boost = 1e-6;
  double weight = 1e-6;
  double approximation = 1.1;
};

struct RunConfig {
  Mode mode = Mode::simulate;
  GridConfig grid;
  DataConfig data;
  IntegratorConfig integrator;
  double T = 10.0;
  std::uint64_t diagnostic_stride = 10;
  std::uint64_t checkpoint_period = 0;  // steps; 0 disables
  PaperConstants constants;
  std::uint64_t seed = 1;
  std::filesystem::path output = "mdlab_out";
  bool allow_past_horizon = false;
  ScanConfig scan;
  ScatteringConfig scattering;
  IdentityConfig identity;
  StrictConfig strict;

  /// Longest simulated time the mode needs.
  double horizon_time() const;
  /// L/2 - 3 width: the time after which the packet front reaches the box edge.
  double horizon() const;
};

/// Parses a config file. Grammar:
///
///   line    := blank | comment | section | entry
///   comment := '#' ...
///   section := '[' name ']'
///   entry   := key '=' value [comment]
///
/// Keys are section-qualified; unknown sections or keys are errors. Missing
/// keys keep their defaults. Errors carry the line number.
RunConfig load_config(const std::filesystem::path& path, Mode mode = Mode::simulate);
RunConfig parse_config(const std::string& text, Mode mode = Mode::simulate);

/// Re-checks cross-field invariants (horizon guard included).
void validate(const RunConfig& c);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& c);

/// Initial-data recipe for the config (deterministic given the seed).
DataRecipe make_recipe(const RunConfig& c);

}  // namespace mdlab
