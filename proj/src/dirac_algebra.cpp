#include "mdlab/dirac_algebra.hpp"

#include <algorithm>
#include <string>

namespace mdlab {

namespace {

const cplx I(0.0, 1.0);

DiracMatrices build() {
  DiracMatrices d;
  Eigen::Matrix2cd s[3];
  s[0] << 0, 1, 1, 0;
  s[1] << 0, -I, I, 0;
  s[2] << 1, 0, 0, -1;
  for (int j = 0; j < 3; ++j) {
    d.alpha[j].setZero();
    d.alpha[j].topRightCorner<2, 2>() = s[j];
    d.alpha[j].bottomLeftCorner<2, 2>() = s[j];
  }
  d.beta.setZero();
  d.beta.diagonal() << 1, 1, -1, -1;
  return d;
}

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

void check_index(int j, const char* what) {
  if (j < 1 || j > 3) throw DomainError(std::string(what) + ": spatial index must be 1..3");
}

}  // namespace

int check_sign(int theta) {
  if (theta != 1 && theta != -1) throw DomainError("sign must be +1 or -1");
  return theta;
}

const DiracMatrices& DiracMatrices::standard() {
  static const DiracMatrices d = build();
  return d;
}

Mat4 DiracMatrices::upper(int mu) const {
  if (mu == 0) return Mat4::Identity();
  if (mu < 0 || mu > 3) throw DomainError("alpha index must be 0..3");
  return alpha[mu - 1];
}

Mat4 DiracMatrices::lower(int mu) const { return mu == 0 ? Mat4(-Mat4::Identity()) : upper(mu); }

Mat4 dirac_symbol(const Vec3& xi, double mass) {
  const auto& d = DiracMatrices::standard();
  return xi[0] * d.alpha[0] + xi[1] * d.alpha[1] + xi[2] * d.alpha[2] + mass * d.beta;
}

Mat4 projector_at(const Vec3& xi, int theta, double mass) {
  check_sign(theta);
  const double e = std::sqrt(mass * mass + dot(xi, xi));
  return 0.5 * (Mat4::Identity() + (theta / e) * dirac_symbol(xi, mass));
}

SpinorField project_spinor(const SpinorField& psi, int theta) {
  check_sign(theta);
  SpinorField out = psi.fourier();
  const FourierGrid& g = *psi.grid();
  const double m = g.mass();
  for (std::size_t p = 0; p < g.size(); ++p) {
    cplx* v = &out(p, 0);
    cplx hv[4];
    apply_dirac_symbol(g.xi(p), m, v, hv);
    const double s = theta / g.dirac_energy(p);
    for (int c = 0; c < 4; ++c) v[c] = 0.5 * (v[c] + s * hv[c]);
  }
  if (psi.side() == Side::physical) out.to_physical();
  return out;
}

SpinorField apply_dirac_operator(const SpinorField& psi) {
  SpinorField out = psi.fourier();
  const FourierGrid& g = *psi.grid();
  const double m = g.mass();
  for (std::size_t p = 0; p < g.size(); ++p) {
    cplx* v = &out(p, 0);
    cplx hv[4];
    apply_dirac_symbol(g.xi(p), m, v, hv);
    std::copy(hv, hv + 4, v);
  }
  if (psi.side() == Side::physical) out.to_physical();
  return out;
}

double clifford_residual() {
  const auto& d = DiracMatrices::standard();
  const Mat4 id = Mat4::Identity();
  double r = max_abs(d.beta * d.beta - id);
  r = std::max(r, max_abs(d.beta - d.beta.adjoint()));
  for (int j = 0; j < 3; ++j) {
    r = std::max(r, max_abs(d.alpha[j] - d.alpha[j].adjoint()));
    r = std::max(r, max_abs(d.alpha[j] * d.beta + d.beta * d.alpha[j]));
    for (int k = 0; k < 3; ++k) {
      const Mat4 anti = d.alpha[j] * d.alpha[k] + d.alpha[k] * d.alpha[j];
      r = std::max(r, max_abs(anti - (j == k ? 2.0 : 0.0) * id));
    }
  }
  return r;
}

double riesz_commutation_residual(const Vec3& xi, int j, int theta, double mass) {
  check_index(j, "riesz_commutation_residual");
  const auto& d = DiracMatrices::standard();
  const double e = std::sqrt(mass * mass + dot(xi, xi));
  const Mat4& a = d.alpha[j - 1];
  const Mat4 r = a * projector_at(xi, theta, mass) - projector_at(xi, -theta, mass) * a -
                 (theta * xi[j - 1] / e) * Mat4::Identity();
  return r.norm();
}

double projector_identity_residual(const Vec3& xi, double mass) {
  const Mat4 pp = projector_at(xi, 1, mass);
  const Mat4 pm = projector_at(xi, -1, mass);
  double r = max_abs(pp + pm - Mat4::Identity());
  r = std::max(r, max_abs(pp * pm));
  r = std::max(r, max_abs(pm * pp));
  for (const Mat4* p : {&pp, &pm}) {
    r = std::max(r, max_abs(*p * *p - *p));
    r = std::max(r, max_abs(*p - p->adjoint()));
    r = std::max(r, std::abs(p->trace() - 2.0));
  }
  return r;
}

double scalar_reduction_residual(const Vec3& xi, int theta, double c0, const Vec3& c, double mass) {
  const auto& d = DiracMatrices::standard();
  const Mat4 p = projector_at(xi, theta, mass);
  const Mat4 m = c0 * Mat4::Identity() + c[0] * d.alpha[0] + c[1] * d.alpha[1] + c[2] * d.alpha[2];
  const double e = std::sqrt(mass * mass + dot(xi, xi));
  const double s = c0 + theta * dot(c, xi) / e;
  return max_abs(p * m * p - s * p);
}

Mat4 rotation_commutator_symbol(const Vec3& xi, int j, int k, int theta, double mass) {
  check_index(j, "rotation_commutator_symbol");
  check_index(k, "rotation_commutator_symbol");
  check_sign(theta);
  const auto& d = DiracMatrices::standard();
  const double e = std::sqrt(mass * mass + dot(xi, xi));
  return (-0.5 * theta / e) * (d.alpha[j - 1] * xi[k - 1] - d.alpha[k - 1] * xi[j - 1]);
}

Mat4 boost_commutator_symbol(const Vec3& xi, int j, int theta, double mass) {
  check_index(j, "boost_commutator_symbol");
  check_sign(theta);
  const auto& d = DiracMatrices::standard();
  const double e = std::sqrt(mass * mass + dot(xi, xi));
  const Mat4 dpi = d.alpha[j - 1] / e - dirac_symbol(xi, mass) * (xi[j - 1] / (e * e * e));
  return (theta * 0.5 * I) * dpi;
}

}  // namespace mdlab
