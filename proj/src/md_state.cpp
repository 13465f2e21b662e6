#include "mdlab/md_state.hpp"

#include <cmath>

#include "mdlab/dirac_algebra.hpp"
#include "mdlab/spectral.hpp"

namespace mdlab {

namespace {

// Tolerated relative Hermitian defect of user-supplied gauge data.
constexpr double reality_tolerance = 1e-10;

const ScalarField& as_fourier(const ScalarField& f, ScalarField& scratch) {
  if (f.side() == Side::fourier) return f;
  scratch = f.fourier();
  return scratch;
}

}  // namespace

MDState MDState::vacuum(GridPtr grid) {
  MDState s;
  s.psi = SpinorField(grid, Side::fourier);
  for (int mu = 0; mu < 4; ++mu) {
    s.A[mu] = ScalarField(grid, Side::fourier);
    s.Adot[mu] = ScalarField(grid, Side::fourier);
  }
  return s;
}

ZeroModes zero_modes(const MDState& s) {
  ZeroModes z;
  for (int mu = 0; mu < 4; ++mu) {
    z.a[mu] = s.A[mu](0);
    z.adot[mu] = s.Adot[mu](0);
  }
  return z;
}

std::array<ScalarField, 4> current(const SpinorField& psi) {
  psi.require(Side::physical, "current");
  const GridPtr& grid = psi.grid();
  std::array<ScalarField, 4> j;
  for (auto& f : j) f = ScalarField(grid, Side::physical);
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const cplx u0 = psi(p, 0), u1 = psi(p, 1), l0 = psi(p, 2), l1 = psi(p, 3);
    j[0](p) = -(std::norm(u0) + std::norm(u1) + std::norm(l0) + std::norm(l1));
    // psi^dagger alpha^j psi = 2 Re(u^dagger sigma_j l)
    j[1](p) = 2.0 * (std::conj(u0) * l1 + std::conj(u1) * l0).real();
    j[2](p) = 2.0 * (std::conj(u0) * l1 * cplx(0, -1) + std::conj(u1) * l0 * cplx(0, 1)).real();
    j[3](p) = 2.0 * (std::conj(u0) * l0 - std::conj(u1) * l1).real();
  }
  return j;
}

std::array<ScalarField, 4> current_source(const SpinorField& psi) {
  auto j = current(psi.physical());
  for (auto& f : j) f = dealias(std::move(f.to_fourier()));
  return j;
}

double lorenz_residual(const MDState& s, double floor) {
  const FourierGrid& g = *s.grid();
  double num = 0.0, a0 = 0.0, div = 0.0;
  for (std::size_t p = 1; p < g.size(); ++p) {
    const Vec3 xi = g.xi(p);
    cplx d = 0.0;
    for (int j = 0; j < 3; ++j) d += cplx(0.0, xi[j]) * s.A[j + 1](p);
    num += std::norm(d - s.Adot[0](p));
    a0 += std::norm(s.Adot[0](p));
    div += std::norm(d);
  }
  const double scale = g.cell_volume() / static_cast<double>(g.size());
  const double denom = std::sqrt(a0 * scale) + std::sqrt(div * scale);
  return std::sqrt(num * scale) / std::max(denom, floor);
}

double charge(const MDState& s) { return l2_norm(s.psi); }

double gauge_reality_defect(const MDState& s) {
  double d = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    d = std::max(d, hermitian_defect(s.A[mu]));
    d = std::max(d, hermitian_defect(s.Adot[mu]));
  }
  return d;
}

SpinorField spinor_packet(GridPtr grid, const SpinorPacket& p) {
  if (p.width <= 0.0) throw DomainError("spinor packet width must be positive");
  if (p.branch != 0) check_sign(p.branch);
  double un = 0.0;
  for (const auto& c : p.polarization) un += std::norm(c);
  if (un == 0.0) throw DomainError("spinor packet polarization is zero");
  un = std::sqrt(un);
  SpinorField f(grid, Side::physical);
  for (std::size_t q = 0; q < grid->size(); ++q) {
    const Vec3 x = grid->position(q);
    const Vec3 r = x - p.center;
    const cplx env = p.amplitude * std::exp(-dot(r, r) / (2.0 * p.width * p.width)) *
                     std::polar(1.0, dot(p.momentum, x));
    for (int c = 0; c < 4; ++c) f(q, c) = env * p.polarization[c] / un;
  }
  f.to_fourier();
  if (p.branch != 0) f = project_spinor(f, p.branch);
  return dealias(std::move(f));
}

ScalarField scalar_packet(GridPtr grid, const ScalarPacket& p) {
  if (p.width <= 0.0) throw DomainError("scalar packet width must be positive");
  ScalarField f(grid, Side::physical);
  for (std::size_t q = 0; q < grid->size(); ++q) {
    const Vec3 x = grid->position(q);
    const Vec3 r = x - p.center;
    f(q) = p.amplitude * std::exp(-dot(r, r) / (2.0 * p.width * p.width)) * std::cos(dot(p.wavevector, x));
  }
  return dealias(std::move(f.to_fourier()));
}

MDState make_initial_data(GridPtr grid, const DataRecipe& recipe) {
  const SpinorField psi0 = spinor_packet(grid, recipe.spinor);
  std::array<ScalarField, 4> a, adot;
  for (int mu = 0; mu < 4; ++mu) {
    a[mu] = scalar_packet(grid, recipe.a[mu]);
    adot[mu] = scalar_packet(grid, recipe.adot[mu]);
  }
  return make_initial_data(psi0, a, adot);
}

MDState make_initial_data(const SpinorField& psi0, const std::array<ScalarField, 4>& a,
                          const std::array<ScalarField, 4>& adot) {
  MDState s;
  s.psi = psi0.fourier();
  for (int mu = 0; mu < 4; ++mu) {
    if (a[mu].grid() != s.grid() || adot[mu].grid() != s.grid()) {
      throw ContractError("make_initial_data: fields on different grids");
    }
    ScalarField scratch;
    s.A[mu] = as_fourier(a[mu], scratch);
    s.Adot[mu] = as_fourier(adot[mu], scratch);
    if (hermitian_defect(s.A[mu]) > reality_tolerance || hermitian_defect(s.Adot[mu]) > reality_tolerance) {
      throw DomainError("initial gauge data for component " + std::to_string(mu) + " is not real");
    }
  }
  return enforce_constraints(std::move(s));
}

MDState enforce_constraints(MDState s) {
  const FourierGrid& g = *s.grid();
  const auto j = current_source(s.psi);
  s.Adot[0](0) = 0.0;
  for (std::size_t p = 1; p < g.size(); ++p) {
    const Vec3 xi = g.xi(p);
    cplx div_a = 0.0, div_adot = 0.0;
    for (int k = 0; k < 3; ++k) {
      div_a += cplx(0.0, xi[k]) * s.A[k + 1](p);
      div_adot += cplx(0.0, xi[k]) * s.Adot[k + 1](p);
    }
    s.Adot[0](p) = div_a;
    const double xi2 = dot(xi, xi);
    s.A[0](p) = -(div_adot - j[0](p)) / xi2;
  }
  return s;
}

ScalarField half_wave(const MDState& s, int mu, int theta_prime) {
  check_sign(theta_prime);
  const FourierGrid& g = *s.grid();
  ScalarField w(s.grid(), Side::fourier);
  for (std::size_t p = 1; p < g.size(); ++p) {
    const double r = g.xi_abs(p);
    const double sr = std::sqrt(r);
    w(p) = 0.5 * (sr * s.A[mu](p) - cplx(0.0, theta_prime) * s.Adot[mu](p) / sr);
  }
  return w;
}

ScalarField wave_profile(const MDState& s, int mu, int theta_prime) {
  ScalarField w = half_wave(s, mu, theta_prime);
  const FourierGrid& g = *s.grid();
  for (std::size_t p = 1; p < g.size(); ++p) w(p) *= std::polar(1.0, -theta_prime * s.t * g.xi_abs(p));
  return w;
}

ScalarField reconstruct_potential(const ScalarField& w_plus, const ScalarField& w_minus, cplx zero_mode) {
  w_plus.require(Side::fourier, "reconstruct_potential");
  w_minus.require(Side::fourier, "reconstruct_potential");
  const FourierGrid& g = *w_plus.grid();
  ScalarField a(w_plus.grid(), Side::fourier);
  a(0) = zero_mode;
  for (std::size_t p = 1; p < g.size(); ++p) a(p) = (w_plus(p) + w_minus(p)) / std::sqrt(g.xi_abs(p));
  return a;
}

SpinorField dirac_component(const MDState& s, int theta) { return project_spinor(s.psi, theta); }

SpinorField dirac_profile(const MDState& s, int theta) {
  SpinorField f = project_spinor(s.psi, theta);
  const FourierGrid& g = *s.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx ph = std::polar(1.0, theta * s.t * g.dirac_energy(p));
    for (int c = 0; c < 4; ++c) f(p, c) *= ph;
  }
  return f;
}

}  // namespace mdlab
