#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mdlab/md_state.hpp"

namespace mdlab {

enum class Scheme { if_rk4, strang2 };

/// What the nonlinear terms act on.
///   full:           both equations coupled
///   external_field: A evolves freely and psi feels it
///   off:            both fields evolve freely
enum class Coupling { full, external_field, off };

struct IntegratorConfig {
  double dt = 0.0;  // 0 selects default_dt
  Scheme scheme = Scheme::if_rk4;
  Coupling coupling = Coupling::full;
  bool dealias = true;
  double horizon = std::numeric_limits<double>::infinity();
};

/// 0.1 * 2 pi / <xi_max>, xi_max = pi n / L.
double default_dt(const FourierGrid& g);
/// Accuracy threshold 0.5 pi / |xi|_max above which a warning is issued.
double dt_warning_threshold(const FourierGrid& g);

/// Fixed stepping plan covering [0, T]: count steps of size T / count with
/// T / count <= dt.
struct StepPlan {
  std::uint64_t count = 0;
  double dt = 0.0;
};
StepPlan plan_steps(double T, double dt);

/// Raised when a step produces NaN or Inf. Carries the last finite state.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::shared_ptr<const MDState> snapshot)
      : Error(what), snapshot_(std::move(snapshot)) {}
  const MDState& snapshot() const { return *snapshot_; }

 private:
  std::shared_ptr<const MDState> snapshot_;
};

struct WaveSource {
  /// |D|^{-1/2} J_mu on nonzero modes (Fourier side).
  std::array<ScalarField, 4> field;
  /// Spatial mean of J_mu: the source of the zero-mode register.
  std::array<double, 4> zero_mode_mean;
};

/// Lawson (integrating-factor) RK4 and Strang-2 steppers with the exact
/// per-mode linear propagators
///
///   psi:       e^{-i tau H} = cos(tau <xi>) - i sin(tau <xi>) H / <xi>
///   (A, A'):   [[cos, sin / |xi|], [-|xi| sin, cos]]  ([[1, tau], [0, 1]] at xi = 0)
///
/// Stepping y in these variables is algebraically the same as stepping the
/// profiles phi_theta, V_{mu,theta'} with the pulled-back nonlinearities.
class Evolver {
 public:
  Evolver(GridPtr grid, IntegratorConfig cfg);

  const IntegratorConfig& config() const { return cfg_; }
  double dt() const { return cfg_.dt; }

  /// A_mu alpha^mu psi, dealiased, Fourier side. A is taken real.
  SpinorField nonlinearity_dirac(const MDState& s) const;
  WaveSource nonlinearity_wave(const MDState& s) const;

  /// Exact free flow by tau (both fields, regardless of coupling).
  void free_flow(MDState& s, double tau) const;

  /// One step of size dt (default: the configured dt). Throws NonFiniteError.
  MDState step(const MDState& s) const { return step(s, cfg_.dt); }
  MDState step(const MDState& s, double dt) const;

  bool past_horizon(double t) const { return t > cfg_.horizon * (1.0 + 1e-12); }

 private:
  struct Tables {
    double tau;
    std::vector<double> dc, ds;  // Dirac cos, sin / <xi>
    std::vector<double> wc, ws, wo;  // wave cos, sin / |xi|, -|xi| sin
  };
  const Tables& tables(double tau) const;
  void apply_flow(MDState& s, const Tables& t) const;
  /// Nonlinear vector field F(y) = (i N, 0, J) with unused parts zero.
  MDState rhs(const MDState& s) const;
  MDState step_rk4(const MDState& s, double h) const;
  MDState step_strang(const MDState& s, double h) const;

  GridPtr grid_;
  IntegratorConfig cfg_;
  mutable std::mutex cache_mutex_;
  mutable std::vector<std::unique_ptr<Tables>> cache_;
};

/// y += a x on every field (time untouched).
void axpy(MDState& y, double a, const MDState& x);

struct Observer {
  std::string name;
  std::uint64_t stride = 10;
  std::function<void(const MDState&, std::uint64_t step)> callback;
};

struct DiagnosticRow {
  double t;
  std::uint64_t step;
  double charge;
  double charge_drift;
  double lorenz_residual;
  double psi_sup;
  bool past_horizon;
};

struct TrajectoryReport {
  std::vector<DiagnosticRow> rows;
  bool completed = false;
  bool past_horizon = false;
  std::string error;
};

struct RunOptions {
  std::uint64_t first_step = 0;
  std::uint64_t last_step = 0;
  std::uint64_t diagnostic_stride = 10;
  /// Reference charge for the drift column (<= 0: the charge at first_step).
  double reference_charge = 0.0;
  /// Optional callback invoked after every flushed row (for streaming output).
  std::function<void(const DiagnosticRow&)> on_row;
};

/// Steps from first_step to last_step, calling observers at their strides
/// (and always at both ends). On error the partial report is kept, the
/// error text recorded, and the exception rethrown.
MDState run(const Evolver& ev, MDState s, const RunOptions& opt, const std::vector<Observer>& observers,
            TrajectoryReport& report);

}  // namespace mdlab
