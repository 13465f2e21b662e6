#include "mdlab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdlab/littlewood_paley.hpp"

namespace mdlab {

namespace {

int index_of(int theta) { return check_sign(theta) > 0 ? 0 : 1; }

double spinor_abs(const cplx* v, int ncomp) {
  double s = 0.0;
  for (int c = 0; c < ncomp; ++c) s += std::norm(v[c]);
  return std::sqrt(s);
}

// Continuum L^2 norm of the rho-weighted field, from Fourier data.
template <int C, class Weight>
double weighted_l2(const Field<C>& f, Weight&& w) {
  const FourierGrid& g = *f.grid();
  double s = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double r = w(g.xi_abs(p));
    if (r == 0.0) continue;
    double a = 0.0;
    for (int c = 0; c < C; ++c) a += std::norm(f(p, c));
    s += r * r * a;
  }
  return std::sqrt(s * g.cell_volume() / static_cast<double>(g.size()));
}

}  // namespace

PaperConstants PaperConstants::with_delta(double delta) {
  PaperConstants c;
  c.delta = delta;
  c.zeta = 1050 * delta;
  c.delta_bar = 410 * delta;
  return c;
}

bool PaperConstants::is_default() const {
  const PaperConstants d;
  return N == d.N && H == d.H && delta == d.delta && zeta == d.zeta && delta_bar == d.delta_bar;
}

int cutoff_K(double s, const PaperConstants& c) {
  if (s < 0.0) throw DomainError("cutoff_K: time must be nonnegative");
  const double x = -(2.0 / 3.0 + 2.0 * c.zeta) * std::log2(japanese(s));
  // Exact powers of two (2^K equal to the bound) must resolve to K itself,
  // not K - 1, despite rounding in the logarithm.
  return static_cast<int>(std::floor(x + 1e-12));
}

PhaseCorrectionTable::PhaseCorrectionTable(GridPtr grid, PaperConstants constants, std::size_t budget)
    : grid_(std::move(grid)), constants_(constants), budget_(budget) {
  const FourierGrid& g = *grid_;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (retained_by_dealias(g, p)) tracked_.push_back(p);
  }
  for (int i = 0; i < 2; ++i) {
    b_[i].assign(g.size(), 0.0);
    wrapped_[i].assign(g.size(), 0);
  }
}

double PhaseCorrectionTable::time() const {
  if (times_.empty()) throw ContractError("phase correction table has no samples");
  return times_.back();
}

const std::vector<double>& PhaseCorrectionTable::b(int theta) const { return b_[index_of(theta)]; }

bool PhaseCorrectionTable::wrapped(std::size_t p, int theta) const { return wrapped_[index_of(theta)][p] != 0; }

std::size_t PhaseCorrectionTable::wrapped_count() const {
  std::size_t n = 0;
  for (const auto& w : wrapped_) n += std::count(w.begin(), w.end(), std::uint8_t{1});
  return n;
}

std::vector<double> PhaseCorrectionTable::integrand(const MDState& state,
                                                    std::vector<std::uint8_t>& wrapped) const {
  const FourierGrid& g = *grid_;
  if (state.grid() != grid_) throw ContractError("phase table and state live on different grids");
  const double s = state.t;
  const int K = cutoff_K(std::max(s, 0.0), constants_);
  const ScalarField* fields[] = {&state.A[0], &state.A[1], &state.A[2], &state.A[3]};
  const LowpassSampler sampler(fields, K, budget_);

  std::vector<double> out(g.size(), 0.0);
  wrapped.assign(g.size(), 0);
  std::array<cplx, 4> a;
  for (const std::size_t p : tracked_) {
    const Vec3 xi = g.xi(p);
    const double e = g.dirac_energy(p);
    const Vec3 x = (s / e) * xi;
    wrapped[p] = sampler.evaluate(x, a) ? 1 : 0;
    out[p] = a[0].real() + (xi[0] * a[1].real() + xi[1] * a[2].real() + xi[2] * a[3].real()) / e;
  }
  return out;
}

void PhaseCorrectionTable::accumulate(const MDState& state) {
  std::vector<std::uint8_t> wrapped;
  std::vector<double> now = integrand(state, wrapped);
  if (!times_.empty()) {
    const double h = state.t - times_.back();
    if (!(h > 0.0)) throw ContractError("phase accumulation times must increase");
    const FourierGrid& g = *grid_;
    for (const std::size_t p : tracked_) {
      const std::size_t q = g.mirror(p);
      // b_-(xi) = b_+(-xi): the theta = - ray of xi is the theta = + ray of -xi.
      b_[0][p] += 0.5 * h * (last_[p] + now[p]);
      b_[1][q] += 0.5 * h * (last_[p] + now[p]);
    }
  }
  const FourierGrid& g = *grid_;
  for (const std::size_t p : tracked_) {
    if (wrapped[p]) {
      wrapped_[0][p] = 1;
      wrapped_[1][g.mirror(p)] = 1;
    }
  }
  last_ = std::move(now);
  times_.push_back(state.t);
}

void accumulate_phase(PhaseCorrectionTable& table, const MDState& state) { table.accumulate(state); }

SpinorField corrected_profile(const MDState& state, const PhaseCorrectionTable& table, int theta) {
  const double t = table.time();
  if (std::abs(t - state.t) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw ContractError("phase correction table is at t = " + std::to_string(t) + " but the state is at t = " +
                        std::to_string(state.t));
  }
  SpinorField f = dirac_profile(state, theta);
  const auto& b = table.b(theta);
  for (std::size_t p = 0; p < f.points(); ++p) {
    const cplx ph = std::polar(1.0, -b[p]);
    for (int c = 0; c < 4; ++c) f(p, c) *= ph;
  }
  return f;
}

Mat4 correction_matrix(const Vec3& xi, int theta, const std::array<double, 4>& c, double mass) {
  const auto& d = DiracMatrices::standard();
  Mat4 m = c[0] * Mat4::Identity();
  for (int j = 0; j < 3; ++j) m += c[j + 1] * d.alpha[j];
  return projector_at(xi, theta, mass) * m;
}

double continuum_fourier_abs(const FourierGrid& g, const cplx* v, int ncomp) {
  return g.cell_volume() * spinor_abs(v, ncomp);
}

NormReport norm_D(const SpinorField& phi) {
  phi.require(Side::fourier, "norm_D");
  const FourierGrid& g = *phi.grid();
  NormReport r;
  std::tie(r.k_min, r.k_max) = g.dyadic_range();
  for (int k = r.k_min; k <= r.k_max; ++k) {
    double sup = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double w = lp::shell(k, g.xi_abs(p));
      if (w > 0.0) sup = std::max(sup, w * continuum_fourier_abs(g, &phi(p, 0), 4));
    }
    const double l2 = weighted_l2(phi, [k](double x) { return lp::shell(k, x); });
    const double jk = japanese(std::ldexp(1.0, k));
    ShellTerm t{k, std::pow(jk, 20) * std::exp2((0.5 - 0.01) * k) * sup,
                std::pow(jk, 38) * std::exp2(-(1.0 - 0.01) * k) * l2, 0.0};
    t.total = t.sup_term + t.l2_term;
    r.value = std::max(r.value, t.total);
    r.shells.push_back(t);
  }
  return r;
}

double maxwell_shell_sum(const ScalarField& v, int k) {
  auto proj = lp::project_shell(v.fourier(), k);
  if (!proj.in_range) return 0.0;
  ScalarField x = std::move(proj.field);
  x.to_physical();
  const FourierGrid& g = *v.grid();
  const auto [j_lo, j_hi] = lp::spatial_index_range(g, k);
  double total = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    double s = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double w = lp::spatial_cutoff(j, k, g.radius(p));
      if (w != 0.0) s += w * w * std::norm(x(p));
    }
    total += std::ldexp(1.0, j) * std::sqrt(s * g.cell_volume());
  }
  return total;
}

NormReport norm_M(const ScalarField& v, const PaperConstants& c) {
  v.require(Side::fourier, "norm_M");
  const FourierGrid& g = *v.grid();
  NormReport r;
  std::tie(r.k_min, r.k_max) = g.dyadic_range();
  const double exponent = 1.0 + 5.0 * c.H[2] * c.delta;
  for (int k = r.k_min; k <= r.k_max; ++k) {
    const double jk = japanese(std::ldexp(1.0, k));
    const double sum = maxwell_shell_sum(v, k);
    ShellTerm t{k, 0.0, std::pow(jk, 25) * std::exp2(exponent * k) * sum, 0.0};
    t.total = t.l2_term;
    r.value = std::max(r.value, t.total);
    r.shells.push_back(t);
  }
  return r;
}

template <int C>
WeightedEnergyReport weighted_energy(const Field<C>& f, int n, ProfileKind kind, const PaperConstants& c) {
  if (n < 0 || n > 2) throw DomainError("weighted_energy: n must be 0, 1 or 2");
  f.require(Side::fourier, "weighted_energy");
  const FourierGrid& g = *f.grid();
  WeightedEnergyReport r;
  const Field<C> x = f.physical();
  r.boundary_fraction = boundary_support_fraction(x, g.length() / 8.0);
  r.boundary_flag = r.boundary_fraction > 1e-10;
  std::array<Field<C>, 3> moments;
  for (int l = 0; l < 3; ++l) moments[l] = multiply_by_coordinate(x, l).to_fourier();
  const auto [k_lo, k_hi] = g.dyadic_range();
  const double scale = std::pow(2.0 * M_PI, 1.5);
  for (int k = k_lo; k <= k_hi; ++k) {
    double best = 0.0;
    for (int l = 0; l < 3; ++l) {
      best = std::max(best, scale * weighted_l2(moments[l], [k](double xi) { return lp::shell(k, xi); }));
    }
    const double jk = japanese(std::ldexp(1.0, k));
    const double w = kind == ProfileKind::dirac ? jk : std::exp2(0.5 * k);
    const double term = std::pow(jk, c.N[n + 1]) * w * best;
    r.shells.emplace_back(k, term);
    r.value = std::max(r.value, term);
  }
  return r;
}

template WeightedEnergyReport weighted_energy(const Field<1>&, int, ProfileKind, const PaperConstants&);
template WeightedEnergyReport weighted_energy(const Field<4>&, int, ProfileKind, const PaperConstants&);

ScatteringSnapshot capture_snapshot(const MDState& state, const PhaseCorrectionTable& table) {
  ScatteringSnapshot s;
  s.t = state.t;
  for (int i = 0; i < 2; ++i) {
    const int theta = i == 0 ? 1 : -1;
    s.phi[i] = dirac_profile(state, theta);
    s.psi_corr[i] = corrected_profile(state, table, theta);
    s.excluded[i].resize(state.grid()->size());
    for (std::size_t p = 0; p < s.excluded[i].size(); ++p) s.excluded[i][p] = table.wrapped(p, theta) ? 1 : 0;
  }
  for (int mu = 0; mu < 4; ++mu) {
    s.V[mu][0] = wave_profile(state, mu, 1);
    s.V[mu][1] = wave_profile(state, mu, -1);
  }
  return s;
}

DriftReport drift_report(const ScatteringSnapshot& s1, const ScatteringSnapshot& s2, const DriftSpec& spec) {
  if (s1.t > s2.t) throw DomainError("drift_report: t1 must not exceed t2");
  if (spec.k_lo > spec.k_hi) throw DomainError("drift_report: empty shell range");
  const FourierGrid& g = *s1.phi[0].grid();
  DriftReport r;
  r.t1 = s1.t;
  r.t2 = s2.t;

  auto excluded = [&](std::size_t p, int i) { return s1.excluded[i][p] || s2.excluded[i][p]; };
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (excluded(p, 0) || excluded(p, 1)) ++r.excluded_modes;
  }

  for (int k = spec.k_lo; k <= spec.k_hi; ++k) {
    ShellDrift d{k, 0.0, 0.0};
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double w = lp::shell(k, g.xi_abs(p));
      if (w == 0.0) continue;
      for (int i = 0; i < 2; ++i) {
        if (excluded(p, i)) continue;
        cplx du[4], dc[4];
        for (int c = 0; c < 4; ++c) {
          du[c] = s2.phi[i](p, c) - s1.phi[i](p, c);
          dc[c] = s2.psi_corr[i](p, c) - s1.psi_corr[i](p, c);
        }
        d.uncorrected = std::max(d.uncorrected, w * continuum_fourier_abs(g, du, 4));
        d.corrected = std::max(d.corrected, w * continuum_fourier_abs(g, dc, 4));
      }
    }
    r.uncorrected = std::max(r.uncorrected, d.uncorrected);
    r.corrected = std::max(r.corrected, d.corrected);
    r.shells.push_back(d);
  }
  r.ratio = r.uncorrected > 0.0 ? r.corrected / r.uncorrected : 0.0;

  // Largest-amplitude modes of the theta = + profile inside the shell range.
  const double lo = std::ldexp(1.0, spec.k_lo - 1);
  const double hi = std::ldexp(1.0, spec.k_hi + 1);
  std::vector<std::size_t> cand;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double x = g.xi_abs(p);
    if (x > lo && x < hi && !excluded(p, 0)) cand.push_back(p);
  }
  auto amp = [&](std::size_t p) { return continuum_fourier_abs(g, &s2.phi[0](p, 0), 4); };
  const std::size_t top = std::min(spec.top_modes, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(top), cand.end(),
                    [&](std::size_t a, std::size_t b) { return amp(a) > amp(b); });
  for (std::size_t i = 0; i < top; ++i) {
    const std::size_t p = cand[i];
    cplx inner = 0.0;
    for (int c = 0; c < 4; ++c) inner += std::conj(s1.phi[0](p, c)) * s2.phi[0](p, c);
    const double a1 = continuum_fourier_abs(g, &s1.phi[0](p, 0), 4);
    const double a2 = amp(p);
    r.modes.push_back({g.mode(p), a2, std::abs(a2 - a1), std::abs(std::arg(inner))});
  }

  for (int mu = 0; mu < 4; ++mu) {
    for (int i = 0; i < 2; ++i) {
      const ScalarField dv = s2.V[mu][i] - s1.V[mu][i];
      for (int k = spec.k_lo; k <= spec.k_hi; ++k) {
        const double d = maxwell_shell_sum(dv, k);
        r.maxwell.push_back({k, mu, i == 0 ? 1 : -1, d});
        r.maxwell_sup = std::max(r.maxwell_sup, d);
      }
    }
  }
  return r;
}

}  // namespace mdlab
