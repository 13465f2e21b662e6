#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mdlab/dirac_algebra.hpp"
#include "mdlab/evolution.hpp"
#include "mdlab/vector_fields.hpp"

using namespace mdlab;
using mdlab::testing::gaussian;
using mdlab::testing::rel_diff;

namespace {

double rel_norm(const SpinorField& a, const SpinorField& b) { return rel_diff(a, b); }

GridPtr fine_grid() {
  static const auto g = FourierGrid::create(64, 80.0);
  return g;
}

}  // namespace

TEST_CASE("rotation of a radial Gaussian vanishes") {
  const auto g = FourierGrid::create(48, 30.0);
  const auto f = gaussian<1>(g, 1.5);
  for (auto [j, k] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{3, 1}}) {
    CHECK(apply_rotation(f, j, k).sup_norm() < 1e-10 * f.sup_norm());
  }
}

TEST_CASE("rotation of x_1 times a Gaussian") {
  const auto g = FourierGrid::create(48, 30.0);
  const double w = 1.5;
  const auto G = gaussian<1>(g, w);
  const auto f = multiply_by_coordinate(G, 0);
  const auto expect = -1.0 * multiply_by_coordinate(G, 1);
  CHECK(rel_diff(apply_rotation(f, 1, 2), expect) < 1e-10);
  // Antisymmetry and linearity.
  CHECK(rel_diff(apply_rotation(f, 2, 1), -1.0 * apply_rotation(f, 1, 2)) < 1e-14);
  const auto h = gaussian<1>(g, 1.2, {0.5, 0.0, -0.3});
  const auto lhs = apply_rotation(cplx(2.0) * f + h, 3, 1);
  const auto rhs = cplx(2.0) * apply_rotation(f, 3, 1) + apply_rotation(h, 3, 1);
  CHECK(rel_diff(lhs, rhs) < 1e-13);
  CHECK_THROWS_AS(apply_rotation(f, 1, 1), ContractError);
}

TEST_CASE("boost of the vacuum and at t = 0") {
  const auto g = FourierGrid::create(16, 16.0);
  const auto b = apply_boost(MDState::vacuum(g), 2);
  CHECK(b.psi.sum_squares() == 0.0);
  for (const auto& a : b.A) CHECK(a.sum_squares() == 0.0);

  DataRecipe r;
  r.spinor.amplitude = 0.05;
  r.spinor.width = 1.5;
  r.a[1] = {0.02, 1.5, {0.0, 0.0, 0.0}, {0.0, 0.5, 0.0}};
  const auto s = make_initial_data(g, r);
  const auto boosted = apply_boost(s, 1);
  const auto expect = multiply_by_coordinate(dirac_time_derivative(s).physical(), 0);
  CHECK(rel_norm(boosted.psi, expect) < 1e-14);
  const auto expect_a = multiply_by_coordinate(s.Adot[2].physical(), 0);
  CHECK(rel_diff(boosted.A[2], expect_a) < 1e-14);
}

TEST_CASE("boost of a plane wave") {
  const auto g = FourierGrid::create(16, 2.0 * M_PI);
  const std::array<int, 3> m{1, 2, 0};
  const Vec3 xi{1.0, 2.0, 0.0};
  const double e = std::sqrt(6.0);
  // Positive-energy eigenvector of the Dirac symbol.
  Spinor4 u = projector_at(xi, 1) * Spinor4(1.0, 0.0, 0.0, 0.0);
  u /= u.norm();
  MDState s = MDState::vacuum(g);
  s.t = 1.3;
  s.psi = unit_mode(g, m, {u[0], u[1], u[2], u[3]});
  const auto psi = s.psi.physical();
  for (int j = 1; j <= 3; ++j) {
    // Gamma_j psi = (t i xi_j - i <xi> x_j) psi on the box window.
    SpinorField expect(g, Side::physical);
    for (std::size_t p = 0; p < g->size(); ++p) {
      const cplx f = cplx(0.0, s.t * xi[j - 1]) - cplx(0.0, e * g->position(p)[j - 1]);
      for (int c = 0; c < 4; ++c) expect(p, c) = f * psi(p, c);
    }
    CHECK(rel_norm(apply_boost(s, j).psi, expect) < 1e-6);
  }
}

TEST_CASE("free jets") {
  const auto g = FourierGrid::create(16, 16.0);
  DataRecipe r;
  r.spinor.amplitude = 1.0;
  r.spinor.width = 1.5;
  const auto psi = make_initial_data(g, r).psi;
  const auto jet = free_dirac_jet(psi, 0.5, 2);
  CHECK(jet.order() == 2);
  // d_t^2 psi = -H^2 psi = -(1 - Laplacian) psi.
  const auto h2 = apply_dirac_operator(apply_dirac_operator(psi));
  CHECK(rel_diff(jet.derivs[2], cplx(-1.0) * h2) < 1e-13);
  CHECK(rel_diff(jet.derivs[0], psi) < 1e-15);
}

TEST_CASE("Lie relations through jets") {
  const auto g = fine_grid();
  const auto psi = localized_random_spinor(g, 3.2, 7);
  const auto jet = free_dirac_jet(psi, 0.7, 3);
  SUBCASE("[Gamma_1, Gamma_2] = Omega_12") {
    const auto ab = apply_composition(jet, {VectorField::gamma1, VectorField::gamma2});
    const auto ba = apply_composition(jet, {VectorField::gamma2, VectorField::gamma1});
    const auto om = apply_composition(jet, {VectorField::omega12});
    CHECK(rel_diff(ab - ba, om) < 1e-8);
  }
  SUBCASE("[Omega_12, Omega_23] = -Omega_31") {
    const auto ab = apply_composition(jet, {VectorField::omega12, VectorField::omega23});
    const auto ba = apply_composition(jet, {VectorField::omega23, VectorField::omega12});
    const auto om = apply_composition(jet, {VectorField::omega31});
    CHECK(rel_diff(ab - ba, cplx(-1.0) * om) < 1e-8);
  }
  SUBCASE("[Gamma_1, d_t] = -d_1") {
    const auto ab = apply_composition(jet, {VectorField::gamma1, VectorField::dt});
    const auto ba = apply_composition(jet, {VectorField::dt, VectorField::gamma1});
    const auto d1 = apply_composition(jet, {VectorField::d1});
    CHECK(rel_diff(ab - ba, cplx(-1.0) * d1) < 1e-8);
  }
  SUBCASE("composition order matters") {
    const auto ab = apply_composition(jet, {VectorField::gamma1, VectorField::omega12});
    const auto ba = apply_composition(jet, {VectorField::omega12, VectorField::gamma1});
    CHECK(rel_diff(ab, ba) > 1e-3);
  }
  CHECK_THROWS_AS(apply_composition(free_dirac_jet(psi, 0.0, 1), {VectorField::gamma1, VectorField::gamma2}),
                  ContractError);
}

TEST_CASE("commutator identities on the fine grid") {
  const auto g = fine_grid();
  const auto psi = localized_random_spinor(g, 3.2, 1);
  CHECK(boundary_support_fraction(psi, g->length() / 8.0) < 1e-12);
  CHECK(rotation_commutator_residual(psi) <= 1e-8);
  CHECK(radial_commutator_residual(psi) <= 1e-10);
  CHECK(boost_commutator_residual(psi) <= 1e-6);
}

TEST_CASE("weight identities on the fine grid") {
  const auto g = fine_grid();
  const auto V = localized_wave_profile(g, 3.2);
  for (int tp : {1, -1}) CHECK(wave_weight_residual(V, 1.0, tp) <= 1e-6);

  std::array<ScalarField, 4> z;
  for (auto& f : z) f = ScalarField(g, Side::fourier);
  MDState s = make_initial_data(cplx(1e-3) * localized_random_spinor(g, 3.2, 2), z, z);
  Evolver ev(g, {});
  for (int i = 0; i < 3; ++i) s = ev.step(s, 0.2);
  CHECK(dirac_weight_residual(s) <= 1e-6);
}
