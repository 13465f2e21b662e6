#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdlab/md_state.hpp"

namespace mdlab {

/// Generators of translations, rotations and Lorentz boosts:
///   d_t, d_1, d_2, d_3,
///   Omega_jk = x_j d_k - x_k d_j,
///   Gamma_j  = t d_j + x_j d_t.
enum class VectorField { dt, d1, d2, d3, omega23, omega31, omega12, gamma1, gamma2, gamma3 };

std::string to_string(VectorField v);

/// Omega_jk f (j, k 1-based, j != k). Spectral derivatives, box-centered x.
/// Result on the physical side.
template <int C>
Field<C> apply_rotation(const Field<C>& f, int j, int k);

/// Time derivatives of a field at time t: derivs[n] = d_t^n f, all on the
/// physical side. Boosts and d_t consume one order.
template <int C>
struct Jet {
  double t = 0.0;
  std::vector<Field<C>> derivs;

  int order() const { return static_cast<int>(derivs.size()) - 1; }
};

/// Free Dirac jet: d_t^n psi = (-i H)^n psi.
Jet<4> free_dirac_jet(const SpinorField& psi, double t, int order);
/// Free wave jet: d_t^{2n} A = Laplacian^n A, d_t^{2n+1} A = Laplacian^n A'.
Jet<1> free_wave_jet(const ScalarField& a, const ScalarField& adot, double t, int order);

template <int C>
Jet<C> apply(const Jet<C>& f, VectorField v);

/// Applies the list right to left, as in operator composition: {X, Y} gives
/// X Y f.
template <int C>
Field<C> apply_composition(const Jet<C>& f, const std::vector<VectorField>& list);

struct BoostResult {
  SpinorField psi;
  std::array<ScalarField, 4> A;
};

/// On-shell time derivative of psi: -i H psi + i A_mu alpha^mu psi.
SpinorField dirac_time_derivative(const MDState& s);

/// Gamma_j psi and Gamma_j A_mu with on-shell time derivatives (j 1-based).
BoostResult apply_boost(const MDState& s, int j);

struct CommutatorReport {
  double rotation = 0.0;         // [Omega_jk, Pi_theta] against its symbol
  double radial = 0.0;           // [Omega_jk, <D>]
  double boost = 0.0;            // [Gamma_j, Pi_theta] against its symbol
  double weight_dirac = 0.0;     // Gamma_j psi_theta two-path identity
  double weight_wave = 0.0;      // Gamma_j W_{mu,theta'} two-path identity
  double boundary_fraction = 0.0;
};

/// max over (j,k), theta of ||[Omega_jk, Pi] psi - sym psi|| / ||psi||.
double rotation_commutator_residual(const SpinorField& psi);
/// max over (j,k) of ||[Omega_jk, <D>] psi|| / ||<D> psi||.
double radial_commutator_residual(const SpinorField& psi);
/// max over j, theta of ||[x_j, Pi] chi - i (d_xi_j Pi) chi|| / ||chi||, with
/// chi the time derivative of the field.
double boost_commutator_residual(const SpinorField& chi);
/// max over j, theta of the relative difference between
///   t d_j psi_theta + x_j d_t psi_theta   (on shell)
/// and
///   -theta i e^{-theta i t <D>} x_j (<D> phi_theta) + i x_j Pi_theta(A_mu alpha^mu psi).
double dirac_weight_residual(const MDState& s);
/// max over j of the relative difference between
///   t d_j W + x_j (i theta' |D| W)   and   theta' i e^{theta' i t |D|} x_j (|D| V)
/// for W = e^{theta' i t |D|} V. The source terms of the full identity
/// coincide on both sides and are omitted.
double wave_weight_residual(const ScalarField& V, double t, int theta_prime);

/// Smooth interior-supported spinor: a sum of `count` Gaussians of the given
/// width with random centers (|c_j| <= 1), small momenta and polarizations.
/// Not truncated, so its spectrum is Gaussian up to the Nyquist modes.
SpinorField localized_random_spinor(GridPtr grid, double width, std::uint64_t seed, int count = 3);
/// Wave profile with V^(xi) = |xi|^8 exp(-width^2 |xi|^2 / 2). The high-order zero at
/// xi = 0 keeps the algebraic tails produced by |D| and e^{it|D|} small.
ScalarField localized_wave_profile(GridPtr grid, double width);

/// Runs all checks on a free spinor psi, the profile V and the coupled state.
CommutatorReport check_commutators(const SpinorField& psi, const ScalarField& V, double t_wave,
                                   const MDState& coupled);

}  // namespace mdlab
