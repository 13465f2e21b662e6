#include "mdlab/run_modes.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "mdlab/dirac_algebra.hpp"

namespace mdlab {

namespace fs = std::filesystem;

GridPtr make_grid(const RunConfig& c) { return FourierGrid::create(c.grid.n, c.grid.L, c.grid.mass); }

MDState initial_state(const RunConfig& c, const GridPtr& grid) {
  return make_initial_data(grid, make_recipe(c));
}

Evolver make_evolver(const RunConfig& c, const GridPtr& grid, double T, StepPlan& plan) {
  IntegratorConfig ic = c.integrator;
  if (ic.dt == 0.0) ic.dt = default_dt(*grid);
  plan = plan_steps(T, ic.dt);
  if (plan.count > 0) ic.dt = plan.dt;
  ic.horizon = c.horizon();
  return Evolver(grid, ic);
}

SimulationResult simulate(const RunConfig& c, const std::optional<fs::path>& resume,
                          const std::optional<fs::path>& checkpoint_dir,
                          const std::function<void(const DiagnosticRow&)>& on_row) {
  const GridPtr grid = make_grid(c);
  const MDState initial = initial_state(c, grid);
  SimulationResult r;
  const Evolver ev = make_evolver(c, grid, c.T, r.plan);

  MDState s = initial;
  if (resume) {
    Checkpoint ck = load_checkpoint(*resume, grid);
    if (ck.step > r.plan.count) {
      throw ContractError("checkpoint step " + std::to_string(ck.step) + " is beyond the planned " +
                          std::to_string(r.plan.count) + " steps");
    }
    if (std::abs(ck.state.t - ck.step * ev.dt()) > 1e-9 * std::max(1.0, c.T)) {
      throw ContractError("checkpoint time does not match the step size of this config");
    }
    s = std::move(ck.state);
    r.first_step = ck.step;
  }

  std::vector<Observer> observers;
  if (checkpoint_dir) {
    fs::create_directories(*checkpoint_dir);
    const std::uint64_t period = c.checkpoint_period > 0 ? c.checkpoint_period : r.plan.count + 1;
    observers.push_back({"checkpoint", period, [&](const MDState& st, std::uint64_t k) {
                           if (k == r.first_step && resume) return;
                           char name[64];
                           std::snprintf(name, sizeof name, "step_%010llu.ckpt", static_cast<unsigned long long>(k));
                           save_checkpoint(*checkpoint_dir / name, st, k);
                         }});
  }
  RunOptions opt;
  opt.first_step = r.first_step;
  opt.last_step = r.plan.count;
  opt.diagnostic_stride = c.diagnostic_stride;
  opt.reference_charge = charge(initial);
  opt.on_row = on_row;
  r.final = run(ev, std::move(s), opt, observers, r.report);
  return r;
}

std::vector<AlgebraResidual> algebra_suite(std::uint64_t samples, std::uint64_t seed, double mass,
                                           double threshold) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> logr(std::log(1e-3), std::log(1e3));
  double proj = 0.0, riesz = 0.0, reduction = 0.0;
  for (std::uint64_t i = 0; i <= samples; ++i) {
    Vec3 xi{0.0, 0.0, 0.0};
    if (i > 0) {
      Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
      const double r = std::exp(logr(rng)) / std::max(norm(d), 1e-300);
      xi = r * d;
    }
    proj = std::max(proj, projector_identity_residual(xi, mass));
    const double c0 = u(rng);
    const Vec3 cv{u(rng), u(rng), u(rng)};
    for (int theta : {1, -1}) {
      for (int j = 1; j <= 3; ++j) riesz = std::max(riesz, riesz_commutation_residual(xi, j, theta, mass));
      reduction = std::max(reduction, scalar_reduction_residual(xi, theta, c0, cv, mass));
    }
  }
  return {{"clifford", clifford_residual(), threshold},
          {"projector", proj, threshold},
          {"riesz_commutation", riesz, threshold},
          {"scalar_reduction", reduction, threshold}};
}

IdentityResult identity_suite(const RunConfig& c) {
  IdentityResult r;
  r.algebra = algebra_suite(c.identity.samples, c.seed, c.grid.mass, c.strict.algebra);
  const auto& id = c.identity;
  const GridPtr grid = FourierGrid::create(id.n, id.L, c.grid.mass);
  const SpinorField psi = localized_random_spinor(grid, id.width, c.seed);
  const ScalarField V = localized_wave_profile(grid, id.width);
  SpinorField psi0 = localized_random_spinor(grid, id.width, c.seed + 1);
  psi0 *= cplx(id.amplitude);
  std::array<ScalarField, 4> zero;
  for (auto& z : zero) z = ScalarField(grid, Side::fourier);
  MDState s = make_initial_data(psi0, zero, zero);
  IntegratorConfig ic;
  const Evolver ev(grid, ic);
  for (std::uint64_t k = 0; k < id.steps; ++k) s = ev.step(s);
  r.commutators = check_commutators(psi, V, id.t_wave, s);
  return r;
}

ScatteringResult scattering_run(const RunConfig& c, const Progress& progress) {
  const auto& sc = c.scattering;
  const GridPtr grid = make_grid(c);
  ScatteringResult r;
  const double t_end = std::max({sc.t2, sc.maxwell_early_end, sc.maxwell_late_end});
  const Evolver ev = make_evolver(c, grid, t_end, r.plan);
  auto step_of = [&](double t) {
    return r.plan.count == 0 ? std::uint64_t{0} : static_cast<std::uint64_t>(std::llround(t / r.plan.dt));
  };
  std::map<std::uint64_t, ScatteringSnapshot> snaps;
  for (double t : {sc.t1, sc.t2, sc.maxwell_early_start, sc.maxwell_early_end, sc.maxwell_late_start,
                   sc.maxwell_late_end}) {
    snaps[step_of(t)];
  }

  PhaseCorrectionTable table(grid, c.constants);
  std::vector<Observer> observers;
  observers.push_back({"phase", 1, [&](const MDState& s, std::uint64_t) { table.accumulate(s); }});
  observers.push_back({"snapshot", 1, [&](const MDState& s, std::uint64_t k) {
                         auto it = snaps.find(k);
                         if (it != snaps.end()) {
                           it->second = capture_snapshot(s, table);
                           if (progress) progress("snapshot at t = " + format_number(s.t));
                         }
                       }});
  RunOptions opt;
  opt.last_step = r.plan.count;
  opt.diagnostic_stride = c.diagnostic_stride;
  run(ev, initial_state(c, grid), opt, observers, r.trajectory);

  DriftSpec spec{sc.k_lo, sc.k_hi, sc.top_modes};
  r.main = drift_report(snaps.at(step_of(sc.t1)), snaps.at(step_of(sc.t2)), spec);
  r.maxwell_early = drift_report(snaps.at(step_of(sc.maxwell_early_start)), snaps.at(step_of(sc.maxwell_early_end)), spec);
  r.maxwell_late = drift_report(snaps.at(step_of(sc.maxwell_late_start)), snaps.at(step_of(sc.maxwell_late_end)), spec);
  r.maxwell_ratio = r.maxwell_early.maxwell_sup > 0.0 ? r.maxwell_late.maxwell_sup / r.maxwell_early.maxwell_sup
                                                      : std::numeric_limits<double>::infinity();
  r.wrapped_rays = table.wrapped_count();
  return r;
}

namespace {

void check(ModeOutcome& o, bool ok, const std::string& what) {
  if (!ok) o.failures.push_back(what);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void trajectory_checks(ModeOutcome& o, const RunConfig& c, const TrajectoryReport& rep) {
  double drift = 0.0, lorenz = 0.0;
  for (const auto& row : rep.rows) {
    drift = std::max(drift, row.charge_drift);
    if (std::isfinite(row.lorenz_residual)) lorenz = std::max(lorenz, row.lorenz_residual);
  }
  o.summary["max_charge_drift"] = drift;
  o.summary["max_lorenz_residual"] = lorenz;
  o.summary["past_horizon"] = rep.past_horizon;
  check(o, drift <= c.strict.charge_drift, "charge drift " + sci(drift) + " > " + sci(c.strict.charge_drift));
  check(o, lorenz <= c.strict.lorenz, "Lorenz residual " + sci(lorenz) + " > " + sci(c.strict.lorenz));
}

void mode_simulate(ModeOutcome& o, const RunConfig& c, const std::optional<fs::path>& resume) {
  CsvWriter csv(c.output / "diagnostics.csv", diagnostic_columns());
  const auto r = simulate(c, resume, c.output / "checkpoints",
                          [&](const DiagnosticRow& row) { csv.row(diagnostic_cells(row)); });
  save_checkpoint(c.output / "final.ckpt", r.final, r.plan.count);
  o.summary["steps"] = r.plan.count;
  o.summary["dt"] = r.plan.dt;
  o.summary["first_step"] = r.first_step;
  o.summary["t_final"] = r.final.t;
  trajectory_checks(o, c, r.report);
}

void mode_resonance(ModeOutcome& o, const RunConfig& c) {
  SampleSpec spec;
  spec.samples = c.scan.samples;
  spec.min_radius = c.scan.min_radius;
  spec.max_radius = c.scan.max_radius;
  spec.compact_radius = c.scan.compact_radius;
  spec.seed = c.seed;
  const auto bounds = scan_all_bounds(spec);
  const auto approx = phase_approximation_scan(c.scan.approximation_samples, c.scan.approximation_xi_max,
                                               c.scan.approximation_eta_max, c.seed, c.grid.mass);
  CsvWriter csv(c.output / "bounds.csv", {"kind", "signs", "quantity", "comparator", "classified_set", "samples",
                                          "min_ratio", "raw_min", "argmin_distance", "positive", "consistent"});
  json list = json::array();
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& b : bounds) {
    csv.row(std::vector<std::string>{to_string(b.kind), to_string(b.signs), b.quantity, "\"" + b.comparator + "\"",
                                     to_string(b.classified), std::to_string(b.samples), format_number(b.min_ratio),
                                     format_number(b.raw_min), format_number(b.argmin_distance),
                                     b.positive ? "1" : "0", b.consistent ? "1" : "0"});
    list.push_back(to_json(b));
    min_ratio = std::min(min_ratio, b.min_ratio);
    check(o, b.positive, to_string(b.kind) + " " + to_string(b.signs) + " " + b.quantity + ": minimum not positive");
    check(o, b.consistent,
          to_string(b.kind) + " " + to_string(b.signs) + " " + b.quantity + ": argmin off the classified set");
  }
  check(o, approx.max_ratio <= c.strict.approximation,
        "phase approximation ratio " + sci(approx.max_ratio) + " > " + sci(c.strict.approximation));
  json rep = report_header(c);
  rep["bounds"] = list;
  rep["approximation"] = to_json(approx);
  write_json(c.output / "resonance.json", rep);
  o.summary["bounds"] = bounds.size();
  o.summary["smallest_min_ratio"] = min_ratio;
  o.summary["approximation_max_ratio"] = approx.max_ratio;
}

void mode_scattering(ModeOutcome& o, const RunConfig& c, const Progress& progress) {
  const auto r = scattering_run(c, progress);
  CsvWriter diag(c.output / "diagnostics.csv", diagnostic_columns());
  for (const auto& row : r.trajectory.rows) diag.row(diagnostic_cells(row));
  CsvWriter shells(c.output / "drift_shells.csv", {"k", "uncorrected", "corrected"});
  for (const auto& s : r.main.shells) shells.row({double(s.k), s.uncorrected, s.corrected});
  CsvWriter modes(c.output / "drift_modes.csv", {"m1", "m2", "m3", "amplitude", "modulus_drift", "argument_drift"});
  for (const auto& m : r.main.modes) {
    modes.row({double(m.mode[0]), double(m.mode[1]), double(m.mode[2]), m.amplitude, m.modulus_drift, m.argument_drift});
  }
  CsvWriter maxwell(c.output / "maxwell_drift.csv", {"window", "k", "mu", "theta_prime", "drift"});
  for (const auto* d : {&r.maxwell_early, &r.maxwell_late}) {
    const std::string w = d == &r.maxwell_early ? "early" : "late";
    for (const auto& m : d->maxwell) {
      maxwell.row(std::vector<std::string>{w, std::to_string(m.k), std::to_string(m.mu), std::to_string(m.theta_prime),
                                           format_number(m.drift)});
    }
  }
  json rep = report_header(c);
  rep["steps"] = r.plan.count;
  rep["dt"] = r.plan.dt;
  rep["drift"] = to_json(r.main);
  rep["maxwell_early"] = to_json(r.maxwell_early);
  rep["maxwell_late"] = to_json(r.maxwell_late);
  rep["maxwell_ratio"] = std::isfinite(r.maxwell_ratio) ? json(r.maxwell_ratio) : json(format_number(r.maxwell_ratio));
  rep["wrapped_rays"] = r.wrapped_rays;
  write_json(c.output / "scattering.json", rep);
  o.summary["corrected_over_uncorrected"] = r.main.ratio;
  o.summary["maxwell_ratio"] = rep["maxwell_ratio"];
  trajectory_checks(o, c, r.trajectory);
}

void mode_identity(ModeOutcome& o, const RunConfig& c) {
  const auto r = identity_suite(c);
  CsvWriter csv(c.output / "identities.csv", {"identity", "residual", "threshold", "pass"});
  json table = json::array();
  auto add = [&](const std::string& name, double v, double thr) {
    const bool ok = v <= thr;
    csv.row(std::vector<std::string>{name, format_number(v), format_number(thr), ok ? "1" : "0"});
    table.push_back({{"identity", name}, {"residual", v}, {"threshold", thr}, {"pass", ok}});
    check(o, ok, name + " residual " + sci(v) + " > " + sci(thr));
  };
  for (const auto& a : r.algebra) add(a.name, a.value, a.threshold);
  const auto& cm = r.commutators;
  add("rotation_commutator", cm.rotation, c.strict.rotation);
  add("radial_commutator", cm.radial, c.strict.radial);
  add("boost_commutator", cm.boost, c.strict.boost);
  add("weight_dirac", cm.weight_dirac, c.strict.weight);
  add("weight_wave", cm.weight_wave, c.strict.weight);
  json rep = report_header(c);
  rep["identity_grid"] = {{"n", c.identity.n}, {"L", c.identity.L}, {"width", c.identity.width}};
  rep["residuals"] = table;
  rep["boundary_fraction"] = cm.boundary_fraction;
  write_json(c.output / "identities.json", rep);
  o.summary["residuals"] = table;
}

}  // namespace

ModeOutcome run_mode(const RunConfig& c, const std::optional<fs::path>& resume, bool strict, const Progress& progress) {
  if (resume && c.mode != Mode::simulate) throw ConfigError("--resume is only valid for simulate");
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(c.output);
  ModeOutcome o;
  o.summary = json::object();
  switch (c.mode) {
    case Mode::simulate: mode_simulate(o, c, resume); break;
    case Mode::resonance_scan: mode_resonance(o, c); break;
    case Mode::scattering_diagnose: mode_scattering(o, c, progress); break;
    case Mode::identity_check: mode_identity(o, c); break;
  }
  o.summary["failures"] = o.failures;
  o.summary["strict"] = strict;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(c.output, c, seconds, o.summary);
  o.exit_code = (strict && !o.failures.empty()) ? exit_invariant : exit_ok;
  return o;
}

}  // namespace mdlab
