#include "mdlab/evolution.hpp"

#include <cmath>

#include "mdlab/dirac_algebra.hpp"
#include "mdlab/spectral.hpp"

namespace mdlab {

namespace {

const cplx I(0.0, 1.0);

MDState zeros_like(const MDState& s) {
  MDState z = MDState::vacuum(s.grid());
  z.t = s.t;
  return z;
}

bool finite(const MDState& s) {
  double total = s.psi.sum_squares();
  for (int mu = 0; mu < 4; ++mu) total += s.A[mu].sum_squares() + s.Adot[mu].sum_squares();
  return std::isfinite(total);
}

std::array<ScalarField, 4> real_potentials(const MDState& s) {
  std::array<ScalarField, 4> a;
  for (int mu = 0; mu < 4; ++mu) {
    a[mu] = s.A[mu].physical();
    for (auto& v : a[mu].data()) v = v.real();
  }
  return a;
}

template <int C>
void axpy_field(Field<C>& y, cplx a, const Field<C>& x) {
  auto yd = y.data();
  const auto xd = x.data();
  for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
}

}  // namespace

double default_dt(const FourierGrid& g) { return 0.1 * 2.0 * M_PI / japanese(g.xi_max()); }

double dt_warning_threshold(const FourierGrid& g) { return 0.5 * M_PI / g.max_xi_abs(); }

StepPlan plan_steps(double T, double dt) {
  if (T < 0.0) throw DomainError("final time must be nonnegative");
  if (dt <= 0.0) throw DomainError("time step must be positive");
  if (T == 0.0) return {0, dt};
  const auto count = static_cast<std::uint64_t>(std::max(1.0, std::ceil(T / dt - 1e-9)));
  return {count, T / static_cast<double>(count)};
}

void axpy(MDState& y, double a, const MDState& x) {
  axpy_field(y.psi, a, x.psi);
  for (int mu = 0; mu < 4; ++mu) {
    axpy_field(y.A[mu], a, x.A[mu]);
    axpy_field(y.Adot[mu], a, x.Adot[mu]);
  }
}

Evolver::Evolver(GridPtr grid, IntegratorConfig cfg) : grid_(std::move(grid)), cfg_(cfg) {
  if (cfg_.dt == 0.0) cfg_.dt = default_dt(*grid_);
  if (!(cfg_.dt > 0.0) || !std::isfinite(cfg_.dt)) throw DomainError("time step must be positive");
}

const Evolver::Tables& Evolver::tables(double tau) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  for (const auto& t : cache_) {
    if (t->tau == tau) return *t;
  }
  auto t = std::make_unique<Tables>();
  t->tau = tau;
  const FourierGrid& g = *grid_;
  const std::size_t n = g.size();
  t->dc.resize(n);
  t->ds.resize(n);
  t->wc.resize(n);
  t->ws.resize(n);
  t->wo.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double e = g.dirac_energy(p);
    t->dc[p] = std::cos(tau * e);
    t->ds[p] = std::sin(tau * e) / e;
    const double w = g.xi_abs(p);
    t->wc[p] = std::cos(tau * w);
    t->ws[p] = w > 0.0 ? std::sin(tau * w) / w : tau;
    t->wo[p] = -w * std::sin(tau * w);
  }
  // Keep the handful of step fractions in use.
  if (cache_.size() >= 8) cache_.erase(cache_.begin());
  cache_.push_back(std::move(t));
  return *cache_.back();
}

void Evolver::apply_flow(MDState& s, const Tables& t) const {
  const FourierGrid& g = *grid_;
  const double m = g.mass();
  for (std::size_t p = 0; p < g.size(); ++p) {
    cplx* v = &s.psi(p, 0);
    cplx hv[4];
    apply_dirac_symbol(g.xi(p), m, v, hv);
    for (int c = 0; c < 4; ++c) v[c] = t.dc[p] * v[c] - I * t.ds[p] * hv[c];
  }
  for (int mu = 0; mu < 4; ++mu) {
    for (std::size_t p = 0; p < g.size(); ++p) {
      const cplx a = s.A[mu](p);
      const cplx b = s.Adot[mu](p);
      s.A[mu](p) = t.wc[p] * a + t.ws[p] * b;
      s.Adot[mu](p) = t.wo[p] * a + t.wc[p] * b;
    }
  }
  s.t += t.tau;
}

void Evolver::free_flow(MDState& s, double tau) const { apply_flow(s, tables(tau)); }

SpinorField Evolver::nonlinearity_dirac(const MDState& s) const {
  SpinorField out = s.psi.physical();
  const auto a = real_potentials(s);
  for (std::size_t p = 0; p < grid_->size(); ++p) {
    cplx* v = &out(p, 0);
    cplx av[4];
    // alpha.a v is the massless symbol at "xi" = (A_1, A_2, A_3).
    apply_dirac_symbol({a[1](p).real(), a[2](p).real(), a[3](p).real()}, 0.0, v, av);
    const double a0 = a[0](p).real();
    for (int c = 0; c < 4; ++c) v[c] = a0 * v[c] + av[c];
  }
  out.to_fourier();
  if (cfg_.dealias) out = dealias(std::move(out));
  return out;
}

WaveSource Evolver::nonlinearity_wave(const MDState& s) const {
  WaveSource w;
  const auto j = current_source(s.psi);
  const FourierGrid& g = *grid_;
  for (int mu = 0; mu < 4; ++mu) {
    w.zero_mode_mean[mu] = j[mu](0).real() / static_cast<double>(g.size());
    w.field[mu] = apply_multiplier(j[mu], [](const Vec3& xi) { return 1.0 / std::sqrt(norm(xi)); });
  }
  return w;
}

MDState Evolver::rhs(const MDState& s) const {
  MDState f = zeros_like(s);
  if (cfg_.coupling == Coupling::off) return f;
  f.psi = nonlinearity_dirac(s);
  f.psi *= I;
  if (cfg_.coupling == Coupling::full) {
    auto j = current_source(s.psi);
    if (!cfg_.dealias) {
      for (int mu = 0; mu < 4; ++mu) j[mu] = current(s.psi.physical())[mu].to_fourier();
    }
    for (int mu = 0; mu < 4; ++mu) f.Adot[mu] = std::move(j[mu]);
  }
  return f;
}

MDState Evolver::step_rk4(const MDState& y, double h) const {
  const Tables& half = tables(0.5 * h);
  const Tables& full = tables(h);

  // Stage times are irrelevant: F has no explicit time dependence.
  MDState k1 = rhs(y);

  MDState yh = y;  // E(h/2) y
  apply_flow(yh, half);

  MDState u = y;
  axpy(u, 0.5 * h, k1);
  apply_flow(u, half);  // E(h/2)(y + h/2 k1)
  MDState k2 = rhs(u);

  u = yh;
  axpy(u, 0.5 * h, k2);
  MDState k3 = rhs(u);

  u = k3;
  apply_flow(u, half);
  MDState v = y;
  apply_flow(v, full);  // E(h) y
  MDState out = v;
  axpy(v, h, u);  // E(h) y + h E(h/2) k3
  MDState k4 = rhs(v);

  apply_flow(k1, full);
  MDState k23 = k2;
  axpy(k23, 1.0, k3);
  apply_flow(k23, half);
  axpy(out, h / 6.0, k1);
  axpy(out, h / 3.0, k23);
  axpy(out, h / 6.0, k4);
  out.t = y.t + h;
  return out;
}

MDState Evolver::step_strang(const MDState& y, double h) const {
  const Tables& half = tables(0.5 * h);
  MDState s = y;
  apply_flow(s, half);
  if (cfg_.coupling != Coupling::off) {
    const bool kick_gauge = cfg_.coupling == Coupling::full;
    if (kick_gauge) {
      const auto j = current_source(s.psi);
      for (int mu = 0; mu < 4; ++mu) axpy_field(s.Adot[mu], 0.5 * h, j[mu]);
    }
    // psi <- exp(i h (A_0 + A.alpha)) psi pointwise.
    SpinorField x = s.psi.physical();
    const auto a = real_potentials(s);
    for (std::size_t p = 0; p < grid_->size(); ++p) {
      const Vec3 av{a[1](p).real(), a[2](p).real(), a[3](p).real()};
      const double r = norm(av);
      cplx* v = &x(p, 0);
      cplx w[4];
      const Vec3 unit = r > 0.0 ? (1.0 / r) * av : Vec3{0.0, 0.0, 0.0};
      apply_dirac_symbol(unit, 0.0, v, w);
      const cplx ph = std::polar(1.0, h * a[0](p).real());
      const double c = std::cos(h * r), sn = std::sin(h * r);
      for (int k = 0; k < 4; ++k) v[k] = ph * (c * v[k] + I * sn * w[k]);
    }
    x.to_fourier();
    s.psi = cfg_.dealias ? dealias(std::move(x)) : std::move(x);
    if (kick_gauge) {
      const auto j = current_source(s.psi);
      for (int mu = 0; mu < 4; ++mu) axpy_field(s.Adot[mu], 0.5 * h, j[mu]);
    }
  }
  apply_flow(s, half);
  s.t = y.t + h;
  return s;
}

MDState Evolver::step(const MDState& s, double dt) const {
  if (s.grid() != grid_) throw ContractError("Evolver::step: state lives on another grid");
  MDState out = cfg_.scheme == Scheme::if_rk4 ? step_rk4(s, dt) : step_strang(s, dt);
  if (!finite(out)) {
    throw NonFiniteError("non-finite values after step at t = " + std::to_string(s.t),
                         std::make_shared<const MDState>(s));
  }
  return out;
}

MDState run(const Evolver& ev, MDState s, const RunOptions& opt, const std::vector<Observer>& observers,
            TrajectoryReport& report) {
  if (opt.last_step < opt.first_step) throw DomainError("run: last step precedes first step");
  const double q0 = opt.reference_charge > 0.0 ? opt.reference_charge : charge(s);
  const std::uint64_t stride = std::max<std::uint64_t>(1, opt.diagnostic_stride);

  auto record = [&](std::uint64_t k) {
    const double q = charge(s);
    DiagnosticRow row{s.t,
                      k,
                      q,
                      q0 > 0.0 ? std::abs(q - q0) / q0 : 0.0,
                      lorenz_residual(s),
                      s.psi.physical().sup_norm(),
                      ev.past_horizon(s.t)};
    report.past_horizon = report.past_horizon || row.past_horizon;
    report.rows.push_back(row);
    if (opt.on_row) opt.on_row(row);
  };
  auto observe = [&](std::uint64_t k, bool force) {
    if (force || (k - opt.first_step) % stride == 0) record(k);
    for (const auto& o : observers) {
      const std::uint64_t st = std::max<std::uint64_t>(1, o.stride);
      if (force || k % st == 0) o.callback(s, k);
    }
  };

  try {
    observe(opt.first_step, true);
    for (std::uint64_t k = opt.first_step + 1; k <= opt.last_step; ++k) {
      s = ev.step(s);
      observe(k, k == opt.last_step);
    }
    report.completed = true;
  } catch (const std::exception& e) {
    report.error = e.what();
    throw;
  }
  return s;
}

}  // namespace mdlab
