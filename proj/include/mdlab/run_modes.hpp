#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdlab/config.hpp"
#include "mdlab/reports.hpp"

namespace mdlab {

/// Exit codes of the command line tool.
enum ExitCode : int { exit_ok = 0, exit_invariant = 1, exit_usage = 2, exit_runtime = 3 };

struct ModeOutcome {
  int exit_code = exit_ok;
  std::vector<std::string> failures;  // invariant checks that did not hold
  json summary;
};

using Progress = std::function<void(const std::string&)>;

/// Runs c.mode, writing manifest.json plus mode-specific CSV/JSON under
/// c.output. With strict, any failed invariant gives exit_invariant.
ModeOutcome run_mode(const RunConfig& c, const std::optional<std::filesystem::path>& resume, bool strict,
                     const Progress& progress = {});

/// Grid, initial data and integrator for a config.
GridPtr make_grid(const RunConfig& c);
MDState initial_state(const RunConfig& c, const GridPtr& grid);
/// Integrator with the step adjusted so that whole steps land on T.
Evolver make_evolver(const RunConfig& c, const GridPtr& grid, double T, StepPlan& plan);

struct SimulationResult {
  MDState final;
  TrajectoryReport report;
  StepPlan plan;
  std::uint64_t first_step = 0;
};

/// Integrates to c.T. Checkpoints go to checkpoint_dir every
/// c.checkpoint_period steps (and at the end) when the directory is given.
SimulationResult simulate(const RunConfig& c, const std::optional<std::filesystem::path>& resume,
                          const std::optional<std::filesystem::path>& checkpoint_dir,
                          const std::function<void(const DiagnosticRow&)>& on_row = {});

struct AlgebraResidual {
  std::string name;
  double value;
  double threshold;
};

struct IdentityResult {
  std::vector<AlgebraResidual> algebra;
  CommutatorReport commutators;
};

/// Algebraic identities over c.identity.samples random xi and the
/// commutator and weight identities on the identity fixtures.
std::vector<AlgebraResidual> algebra_suite(std::uint64_t samples, std::uint64_t seed, double mass,
                                           double threshold);
IdentityResult identity_suite(const RunConfig& c);

struct ScatteringResult {
  DriftReport main;            // (t1, t2)
  DriftReport maxwell_early;
  DriftReport maxwell_late;
  double maxwell_ratio = 0.0;  // late / early Maxwell shell drift
  TrajectoryReport trajectory;
  StepPlan plan;
  std::size_t wrapped_rays = 0;
};

/// Coupled run with the phase table accumulated every step and snapshots
/// at the configured times (rounded to the nearest step).
ScatteringResult scattering_run(const RunConfig& c, const Progress& progress = {});

}  // namespace mdlab
