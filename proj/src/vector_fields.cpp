#include "mdlab/vector_fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mdlab/dirac_algebra.hpp"
#include "mdlab/evolution.hpp"
#include "mdlab/spectral.hpp"

namespace mdlab {

namespace {

const cplx I(0.0, 1.0);

void check_axis(int j, const char* what) {
  if (j < 1 || j > 3) throw ContractError(std::string(what) + ": axis must be 1, 2 or 3");
}

/// d/dx_j (1-based) with physical input and output.
template <int C>
Field<C> dx(const Field<C>& f, int j) {
  return derivative(f.fourier(), j - 1).to_physical();
}

template <int C>
Field<C> xmul(const Field<C>& f, int j) {
  return multiply_by_coordinate(f.physical(), j - 1);
}

double energy_at(const Vec3& xi, double mass) { return std::sqrt(mass * mass + dot(xi, xi)); }

/// Per-mode 4x4 symbol applied to a spinor; Fourier in, physical out.
template <class Symbol>
SpinorField apply_matrix_symbol(const SpinorField& f, Symbol&& sym) {
  SpinorField out = f.fourier();
  const FourierGrid& g = *f.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Mat4 m = sym(g.xi(p));
    Spinor4 v;
    for (int c = 0; c < 4; ++c) v(c) = out(p, c);
    const Spinor4 w = m * v;
    for (int c = 0; c < 4; ++c) out(p, c) = w(c);
  }
  return out.to_physical();
}

template <int C>
double rel(const Field<C>& diff, const Field<C>& ref) {
  const double r = std::sqrt(ref.sum_squares());
  const double d = std::sqrt(diff.sum_squares());
  return r > 0.0 ? d / r : d;
}

constexpr int pairs[3][2] = {{1, 2}, {2, 3}, {3, 1}};

}  // namespace

std::string to_string(VectorField v) {
  switch (v) {
    case VectorField::dt: return "dt";
    case VectorField::d1: return "d1";
    case VectorField::d2: return "d2";
    case VectorField::d3: return "d3";
    case VectorField::omega23: return "omega23";
    case VectorField::omega31: return "omega31";
    case VectorField::omega12: return "omega12";
    case VectorField::gamma1: return "gamma1";
    case VectorField::gamma2: return "gamma2";
    case VectorField::gamma3: return "gamma3";
  }
  return "?";
}

template <int C>
Field<C> apply_rotation(const Field<C>& f, int j, int k) {
  check_axis(j, "apply_rotation");
  check_axis(k, "apply_rotation");
  if (j == k) throw ContractError("apply_rotation: j and k must differ");
  Field<C> a = xmul(dx(f, k), j);
  a -= xmul(dx(f, j), k);
  return a;
}

Jet<4> free_dirac_jet(const SpinorField& psi, double t, int order) {
  if (order < 0) throw ContractError("free_dirac_jet: negative order");
  Jet<4> jet;
  jet.t = t;
  SpinorField cur = psi.fourier();
  for (int n = 0; n <= order; ++n) {
    jet.derivs.push_back(cur.physical());
    cur = apply_dirac_operator(cur);
    cur *= -I;
  }
  return jet;
}

Jet<1> free_wave_jet(const ScalarField& a, const ScalarField& adot, double t, int order) {
  if (order < 0) throw ContractError("free_wave_jet: negative order");
  Jet<1> jet;
  jet.t = t;
  ScalarField even = a.fourier();
  ScalarField odd = adot.fourier();
  auto laplacian = [](const Vec3& xi) { return -dot(xi, xi); };
  for (int n = 0; n <= order; ++n) {
    if (n % 2 == 0) {
      jet.derivs.push_back(even.physical());
      even = apply_multiplier(std::move(even), laplacian);
    } else {
      jet.derivs.push_back(odd.physical());
      odd = apply_multiplier(std::move(odd), laplacian);
    }
  }
  return jet;
}

template <int C>
Jet<C> apply(const Jet<C>& f, VectorField v) {
  if (f.derivs.empty()) throw ContractError("apply: empty jet");
  Jet<C> out;
  out.t = f.t;
  const int K = f.order();
  auto need_time = [&] {
    if (K < 1) throw ContractError("apply: jet order too low for a time derivative");
  };
  switch (v) {
    case VectorField::dt:
      need_time();
      out.derivs.assign(f.derivs.begin() + 1, f.derivs.end());
      break;
    case VectorField::d1:
    case VectorField::d2:
    case VectorField::d3: {
      const int j = static_cast<int>(v) - static_cast<int>(VectorField::d1) + 1;
      for (const auto& d : f.derivs) out.derivs.push_back(dx(d, j));
      break;
    }
    case VectorField::omega23:
    case VectorField::omega31:
    case VectorField::omega12: {
      const int* jk = pairs[v == VectorField::omega12 ? 0 : v == VectorField::omega23 ? 1 : 2];
      for (const auto& d : f.derivs) out.derivs.push_back(apply_rotation(d, jk[0], jk[1]));
      break;
    }
    case VectorField::gamma1:
    case VectorField::gamma2:
    case VectorField::gamma3: {
      need_time();
      const int j = static_cast<int>(v) - static_cast<int>(VectorField::gamma1) + 1;
      // d_t^k (t d_j f + x_j d_t f) = t d_j f^(k) + k d_j f^(k-1) + x_j f^(k+1)
      for (int k = 0; k < K; ++k) {
        Field<C> g = dx(f.derivs[k], j);
        g *= cplx(f.t);
        if (k > 0) {
          Field<C> h = dx(f.derivs[k - 1], j);
          h *= cplx(static_cast<double>(k));
          g += h;
        }
        g += xmul(f.derivs[k + 1], j);
        out.derivs.push_back(std::move(g));
      }
      break;
    }
  }
  return out;
}

template <int C>
Field<C> apply_composition(const Jet<C>& f, const std::vector<VectorField>& list) {
  Jet<C> cur = f;
  for (auto it = list.rbegin(); it != list.rend(); ++it) cur = apply(cur, *it);
  return cur.derivs.front();
}

SpinorField dirac_time_derivative(const MDState& s) {
  SpinorField h = apply_dirac_operator(s.psi.fourier());
  h *= -I;
  Evolver ev(s.grid(), IntegratorConfig{});
  SpinorField n = ev.nonlinearity_dirac(s);
  n *= I;
  h += n;
  return h;
}

BoostResult apply_boost(const MDState& s, int j) {
  check_axis(j, "apply_boost");
  BoostResult r;
  r.psi = dx(s.psi, j);
  r.psi *= cplx(s.t);
  r.psi += xmul(dirac_time_derivative(s), j);
  for (int mu = 0; mu < 4; ++mu) {
    r.A[mu] = dx(s.A[mu], j);
    r.A[mu] *= cplx(s.t);
    r.A[mu] += xmul(s.Adot[mu], j);
  }
  return r;
}

double rotation_commutator_residual(const SpinorField& psi) {
  const double m = psi.grid()->mass();
  double worst = 0.0;
  for (int theta : {1, -1}) {
    for (const auto& jk : pairs) {
      const int j = jk[0], k = jk[1];
      SpinorField lhs = apply_rotation(project_spinor(psi.fourier(), theta), j, k);
      lhs -= project_spinor(apply_rotation(psi, j, k), theta).physical();
      const SpinorField rhs = apply_matrix_symbol(
          psi, [&](const Vec3& xi) { return rotation_commutator_symbol(xi, j, k, theta, m); });
      worst = std::max(worst, rel(lhs - rhs, psi.physical()));
    }
  }
  return worst;
}

double radial_commutator_residual(const SpinorField& psi) {
  const double m = psi.grid()->mass();
  auto energy = [m](const Vec3& xi) { return energy_at(xi, m); };
  const SpinorField dpsi = apply_multiplier(psi.fourier(), energy);
  double worst = 0.0;
  for (const auto& jk : pairs) {
    SpinorField a = apply_rotation(dpsi, jk[0], jk[1]);
    a -= apply_multiplier(apply_rotation(psi, jk[0], jk[1]).fourier(), energy).physical();
    worst = std::max(worst, rel(a, dpsi.physical()));
  }
  return worst;
}

double boost_commutator_residual(const SpinorField& chi) {
  const double m = chi.grid()->mass();
  double worst = 0.0;
  for (int theta : {1, -1}) {
    for (int j = 1; j <= 3; ++j) {
      SpinorField lhs = xmul(project_spinor(chi.fourier(), theta), j);
      lhs -= project_spinor(xmul(chi, j).fourier(), theta).physical();
      const SpinorField rhs =
          apply_matrix_symbol(chi, [&](const Vec3& xi) { return boost_commutator_symbol(xi, j, theta, m); });
      worst = std::max(worst, rel(lhs - rhs, chi.physical()));
    }
  }
  return worst;
}

double dirac_weight_residual(const MDState& s) {
  const double m = s.grid()->mass();
  const double t = s.t;
  Evolver ev(s.grid(), IntegratorConfig{});
  const SpinorField n = ev.nonlinearity_dirac(s);
  const SpinorField dt_psi = dirac_time_derivative(s);
  double worst = 0.0;
  for (int theta : {1, -1}) {
    const SpinorField psi_t = dirac_component(s, theta);
    const SpinorField dt_psi_t = project_spinor(dt_psi, theta);
    const SpinorField pn = project_spinor(n, theta).physical();
    const SpinorField phi = dirac_profile(s, theta);
    const SpinorField d_phi = apply_multiplier(phi, [m](const Vec3& xi) { return energy_at(xi, m); });
    for (int j = 1; j <= 3; ++j) {
      SpinorField path1 = dx(psi_t, j);
      path1 *= cplx(t);
      path1 += xmul(dt_psi_t, j);

      SpinorField xd = xmul(d_phi, j).to_fourier();
      xd = apply_multiplier(std::move(xd), [&](const Vec3& xi) {
        return -static_cast<double>(theta) * I * std::exp(-static_cast<double>(theta) * I * t * energy_at(xi, m));
      });
      SpinorField path2 = xd.to_physical();
      SpinorField src = xmul(pn, j);
      src *= I;
      path2 += src;
      worst = std::max(worst, rel(path1 - path2, path1));
    }
  }
  return worst;
}

double wave_weight_residual(const ScalarField& V, double t, int theta_prime) {
  check_sign(theta_prime);
  const double th = theta_prime;
  auto absxi = [](const Vec3& xi) { return norm(xi); };
  const ScalarField W =
      apply_multiplier(V.fourier(), [&](const Vec3& xi) { return std::exp(th * I * t * norm(xi)); });
  const ScalarField dW = apply_multiplier(W, absxi);
  const ScalarField dV = apply_multiplier(V.fourier(), absxi);
  double worst = 0.0;
  for (int j = 1; j <= 3; ++j) {
    ScalarField path1 = dx(W, j);
    path1 *= cplx(t);
    ScalarField r = xmul(dW, j);
    r *= th * I;
    path1 += r;

    ScalarField path2 = apply_multiplier(xmul(dV, j).to_fourier(), [&](const Vec3& xi) {
                          return th * I * std::exp(th * I * t * norm(xi));
                        }).to_physical();
    worst = std::max(worst, rel(path1 - path2, path1));
  }
  return worst;
}

SpinorField localized_random_spinor(GridPtr grid, double width, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  SpinorField f(grid, Side::physical);
  const FourierGrid& gr = *grid;
  for (int i = 0; i < count; ++i) {
    const Vec3 c{u(rng), u(rng), u(rng)};
    const Vec3 k{0.25 * u(rng), 0.25 * u(rng), 0.25 * u(rng)};
    std::array<cplx, 4> pol;
    for (auto& v : pol) v = cplx(g(rng), g(rng));
    for (std::size_t p = 0; p < gr.size(); ++p) {
      const Vec3 d = gr.position(p) - c;
      const cplx e = std::exp(-dot(d, d) / (2.0 * width * width)) * std::polar(1.0, dot(k, gr.position(p)));
      for (int a = 0; a < 4; ++a) f(p, a) += e * pol[a];
    }
  }
  return f.to_fourier();
}

ScalarField localized_wave_profile(GridPtr grid, double width) {
  ScalarField f(grid, Side::fourier);
  const FourierGrid& g = *grid;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double r2 = dot(g.xi(p), g.xi(p));
    const auto m = g.mode(p);
    // Grid index 0 sits at x = -L/2; the sign centers the profile at x = 0.
    const double sign = ((m[0] + m[1] + m[2]) % 2 == 0) ? 1.0 : -1.0;
    const double r4 = r2 * r2;
    f(p) = sign * r4 * r4 * std::exp(-0.5 * width * width * r2);
  }
  return f;
}

CommutatorReport check_commutators(const SpinorField& psi, const ScalarField& V, double t_wave,
                                   const MDState& coupled) {
  CommutatorReport r;
  r.rotation = rotation_commutator_residual(psi);
  r.radial = radial_commutator_residual(psi);
  SpinorField chi = apply_dirac_operator(psi.fourier());
  chi *= -I;
  r.boost = boost_commutator_residual(chi);
  r.weight_dirac = dirac_weight_residual(coupled);
  r.weight_wave = std::max(wave_weight_residual(V, t_wave, 1), wave_weight_residual(V, t_wave, -1));
  const double margin = psi.grid()->length() / 8.0;
  r.boundary_fraction = std::max({boundary_support_fraction(psi, margin), boundary_support_fraction(V, margin),
                                  boundary_support_fraction(coupled.psi, margin)});
  return r;
}

template Field<1> apply_rotation(const Field<1>&, int, int);
template Field<4> apply_rotation(const Field<4>&, int, int);
template Jet<1> apply(const Jet<1>&, VectorField);
template Jet<4> apply(const Jet<4>&, VectorField);
template Field<1> apply_composition(const Jet<1>&, const std::vector<VectorField>&);
template Field<4> apply_composition(const Jet<4>&, const std::vector<VectorField>&);

}  // namespace mdlab
