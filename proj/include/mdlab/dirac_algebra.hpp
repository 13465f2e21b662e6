#pragma once

#include <array>

#include <Eigen/Dense>

#include "mdlab/field.hpp"

namespace mdlab {

using Mat4 = Eigen::Matrix4cd;
using Spinor4 = Eigen::Vector4cd;

/// Validates a branch sign and returns it as +1 or -1.
int check_sign(int theta);

/// Dirac matrices in the Pauli-Dirac representation:
///
///   alpha^j = [[0, sigma_j], [sigma_j, 0]],  beta = diag(1, 1, -1, -1),
///   alpha^0 = I.
///
/// Indices are lowered with eta = diag(-1, 1, 1, 1), so alpha_0 = -I and
/// alpha_j = alpha^j.
struct DiracMatrices {
  std::array<Mat4, 3> alpha;
  Mat4 beta;

  static const DiracMatrices& standard();

  /// alpha^mu, mu = 0..3.
  Mat4 upper(int mu) const;
  /// alpha_mu, mu = 0..3.
  Mat4 lower(int mu) const;
};

/// H(xi) = alpha.xi + m beta.
Mat4 dirac_symbol(const Vec3& xi, double mass = 1.0);

/// Pi_theta(xi) = (I + theta H(xi) / <xi>_m) / 2.
Mat4 projector_at(const Vec3& xi, int theta, double mass = 1.0);

/// H(xi) v for a single spinor, without forming the matrix.
inline void apply_dirac_symbol(const Vec3& xi, double mass, const cplx* v, cplx* out) {
  // With v = (u, l): H v = (sigma.xi l + m u, sigma.xi u - m l).
  const cplx a(xi[0], -xi[1]);
  const cplx b(xi[0], xi[1]);
  const cplx su0 = xi[2] * v[0] + a * v[1];
  const cplx su1 = b * v[0] - xi[2] * v[1];
  const cplx sl0 = xi[2] * v[2] + a * v[3];
  const cplx sl1 = b * v[2] - xi[2] * v[3];
  out[0] = sl0 + mass * v[0];
  out[1] = sl1 + mass * v[1];
  out[2] = su0 - mass * v[2];
  out[3] = su1 - mass * v[3];
}

/// Per-mode Pi_theta. The result is on the same side as the input.
SpinorField project_spinor(const SpinorField& psi, int theta);

/// Per-mode H(xi) (the free Dirac operator alpha.D + m beta). Same side as
/// the input.
SpinorField apply_dirac_operator(const SpinorField& psi);

/// Largest deviation from the Clifford relations and hermiticity.
double clifford_residual();

/// Frobenius norm of alpha^j Pi_theta - Pi_{-theta} alpha^j - theta xi_j/<xi> I.
/// j is 1-based (1..3).
double riesz_commutation_residual(const Vec3& xi, int j, int theta, double mass = 1.0);

/// Largest entry of Pi_+ + Pi_- - I, Pi_theta Pi_{-theta}, Pi^2 - Pi,
/// Pi - Pi^dagger and |tr Pi - 2| at xi.
double projector_identity_residual(const Vec3& xi, double mass = 1.0);

/// Largest entry of Pi (c0 + c_j alpha^j) Pi - (c0 + theta c.xi/<xi>) Pi.
double scalar_reduction_residual(const Vec3& xi, int theta, double c0, const Vec3& c,
                                 double mass = 1.0);

/// Symbol of [Omega_jk, Pi_theta] with Omega_jk = x_j d_k - x_k d_j
/// (j, k 1-based):
///
///   -(theta / 2) (alpha_j xi_k - alpha_k xi_j) / <xi>.
Mat4 rotation_commutator_symbol(const Vec3& xi, int j, int k, int theta, double mass = 1.0);

/// Symbol of [Gamma_j, Pi_theta] with Gamma_j = t d_j + x_j d_t, acting on
/// d_t psi (j 1-based):
///
///   i d_{xi_j} Pi_theta = theta (i/2) (alpha_j / <xi> - H(xi) xi_j / <xi>^3).
Mat4 boost_commutator_symbol(const Vec3& xi, int j, int theta, double mass = 1.0);

}  // namespace mdlab
