#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mdlab/dirac_algebra.hpp"

using namespace mdlab;
using mdlab::testing::random_band_limited;
using mdlab::testing::rel_diff;

namespace {

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

Vec3 random_xi(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> lg(-3.0, 3.0);
  Vec3 d{u(rng), u(rng), u(rng)};
  const double s = std::pow(10.0, lg(rng)) / std::max(norm(d), 1e-12);
  return {d[0] * s, d[1] * s, d[2] * s};
}

}  // namespace

TEST_CASE("Pauli-Dirac matrices") {
  const auto& d = DiracMatrices::standard();
  CHECK(clifford_residual() == 0.0);
  Mat4 beta = Mat4::Zero();
  beta.diagonal() << 1.0, 1.0, -1.0, -1.0;
  CHECK(max_abs(d.beta - beta) == 0.0);
  // alpha^3 = offdiag(sigma_3, sigma_3)
  CHECK(d.alpha[2](0, 2) == cplx(1.0));
  CHECK(d.alpha[2](1, 3) == cplx(-1.0));
  CHECK(d.alpha[1](0, 3) == cplx(0.0, -1.0));
  CHECK(max_abs(d.lower(0) + Mat4::Identity()) == 0.0);
  CHECK(max_abs(d.upper(0) - Mat4::Identity()) == 0.0);
  CHECK(max_abs(d.lower(2) - d.alpha[1]) == 0.0);
}

TEST_CASE("projector at the zero frequency") {
  Mat4 up = Mat4::Zero();
  up.diagonal() << 1.0, 1.0, 0.0, 0.0;
  CHECK(max_abs(projector_at({0, 0, 0}, 1) - up) < 1e-15);
  CHECK(max_abs(projector_at({0, 0, 0}, -1) - (Mat4::Identity() - up)) < 1e-15);
  CHECK_THROWS_AS(projector_at({0, 0, 0}, 0), DomainError);
}

TEST_CASE("projector identities over random frequencies") {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) worst = std::max(worst, projector_identity_residual(random_xi(rng)));
  CHECK(worst < 1e-12);
  CHECK(projector_identity_residual({0.3, -2.0, 1.1}, 2.5) < 1e-13);
}

TEST_CASE("Riesz commutation") {
  for (int j = 1; j <= 3; ++j) {
    for (int th : {1, -1}) CHECK(riesz_commutation_residual({0, 0, 0}, j, th) < 1e-15);
  }
  // Oracle for xi = (1,0,0), j = 1, theta = +: alpha^1 Pi_+ - Pi_- alpha^1 = I / sqrt 2.
  const auto& d = DiracMatrices::standard();
  const Vec3 xi{1.0, 0.0, 0.0};
  const Mat4 lhs = d.alpha[0] * projector_at(xi, 1) - projector_at(xi, -1) * d.alpha[0];
  CHECK(max_abs(lhs - Mat4::Identity() / std::sqrt(2.0)) < 1e-15);
  CHECK(riesz_commutation_residual(xi, 1, 1) <= 1e-13);

  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 x = random_xi(rng);
    for (int jj = 1; jj <= 3; ++jj) worst = std::max(worst, riesz_commutation_residual(x, jj, i % 2 ? 1 : -1));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("scalar reduction") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vec3 xi = random_xi(rng);
    worst = std::max(worst, scalar_reduction_residual(xi, i % 2 ? 1 : -1, u(rng), {u(rng), u(rng), u(rng)}));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("commutator symbols") {
  const auto& d = DiracMatrices::standard();
  CHECK(max_abs(rotation_commutator_symbol({0, 0, 0}, 1, 2, 1)) == 0.0);
  for (int th : {1, -1}) {
    for (int j = 1; j <= 3; ++j) {
      const Mat4 expect = cplx(0.0, 0.5 * th) * d.alpha[j - 1];
      CHECK(max_abs(boost_commutator_symbol({0, 0, 0}, j, th) - expect) < 1e-15);
    }
  }
  // theta = +: the boost symbol is i dPi_+/dxi_j. Finite-difference oracle.
  const Vec3 xi{0.4, -1.2, 0.7};
  const double h = 1e-5;
  for (int j = 1; j <= 3; ++j) {
    Vec3 a = xi, b = xi;
    a[j - 1] += h;
    b[j - 1] -= h;
    const Mat4 fd = (projector_at(a, 1) - projector_at(b, 1)) / (2.0 * h);
    CHECK(max_abs(boost_commutator_symbol(xi, j, 1) - cplx(0.0, 1.0) * fd) < 1e-9);
  }
  CHECK_THROWS_AS(rotation_commutator_symbol(xi, 0, 1, 1), DomainError);
}

TEST_CASE("project_spinor") {
  const auto g = FourierGrid::create(8, 6.0);
  SpinorField up(g, Side::fourier);
  up(0, 0) = 1.0;
  CHECK(rel_diff(project_spinor(up, 1), up) == 0.0);
  CHECK(project_spinor(up, -1).sum_squares() == 0.0);

  const auto psi = random_band_limited<4>(g, 4, 8);
  const auto pp = project_spinor(psi, 1);
  const auto pm = project_spinor(psi, -1);
  CHECK(rel_diff(pp + pm, psi) < 1e-14);
  CHECK(std::abs(pp.sum_squares() + pm.sum_squares() - psi.sum_squares()) / psi.sum_squares() < 1e-12);
  CHECK(rel_diff(project_spinor(pp, 1), pp) < 1e-12);
  // Physical input comes back physical.
  CHECK(project_spinor(psi.physical(), 1).side() == Side::physical);
}
