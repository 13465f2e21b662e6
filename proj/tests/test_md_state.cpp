#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "mdlab/dirac_algebra.hpp"
#include "mdlab/md_state.hpp"

using namespace mdlab;
using mdlab::testing::gaussian;
using mdlab::testing::random_band_limited;
using mdlab::testing::rel_diff;

namespace {

SpinorPacket test_packet() {
  SpinorPacket p;
  p.amplitude = 0.05;
  p.width = 1.5;
  p.center = {0.3, -0.2, 0.1};
  p.momentum = {0.4, 0.0, -0.3};
  p.polarization = {1.0, cplx(0.0, 0.5), 0.2, -0.3};
  return p;
}

std::array<ScalarField, 4> zero_gauge(const GridPtr& g) {
  std::array<ScalarField, 4> z;
  for (auto& f : z) f = ScalarField(g, Side::fourier);
  return z;
}

}  // namespace

TEST_CASE("current") {
  const auto g = FourierGrid::create(8, 6.0);
  SpinorField psi(g, Side::physical);
  for (const auto& j : current(psi)) CHECK(j.sum_squares() == 0.0);
  for (std::size_t p = 0; p < g->size(); ++p) psi(p, 0) = 1.0;
  const auto j = current(psi);
  for (std::size_t p = 0; p < g->size(); ++p) {
    CHECK(j[0](p) == cplx(-1.0));
    CHECK(j[1](p) == cplx(0.0));
    CHECK(j[2](p) == cplx(0.0));
    CHECK(j[3](p) == cplx(0.0));
  }
  // Oracle: J_mu = psi^dagger alpha_mu psi by 4x4 arithmetic.
  const auto r = random_band_limited<4>(g, 3, 2).physical();
  const auto jr = current(r);
  const auto& d = DiracMatrices::standard();
  double err = 0.0;
  double imag = 0.0;
  for (std::size_t p = 0; p < g->size(); ++p) {
    Spinor4 v;
    for (int c = 0; c < 4; ++c) v[c] = r(p, c);
    for (int mu = 0; mu < 4; ++mu) {
      const cplx e = v.dot(d.lower(mu) * v);
      err = std::max(err, std::abs(e - jr[mu](p)));
      imag = std::max(imag, std::abs(e.imag()));
    }
    CHECK(jr[0](p).real() <= 0.0);
  }
  CHECK(err < 1e-12);
  CHECK(imag < 1e-13);
}

TEST_CASE("vacuum") {
  const auto g = FourierGrid::create(8, 6.0);
  const auto v = MDState::vacuum(g);
  CHECK(charge(v) == 0.0);
  CHECK(lorenz_residual(v) == 0.0);
  const auto s = make_initial_data(SpinorField(g, Side::fourier), zero_gauge(g), zero_gauge(g));
  CHECK(lorenz_residual(s) == 0.0);
  CHECK(charge(s) == 0.0);
}

TEST_CASE("charge of a unit mode") {
  const auto g = FourierGrid::create(8, 6.0);
  MDState s = MDState::vacuum(g);
  s.psi = unit_mode(g, {1, -2, 0}, {0.0, 1.0, 0.0, 0.0});
  CHECK(charge(s) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("compatible initial data") {
  const auto g = FourierGrid::create(16, 12.0);
  const auto psi0 = spinor_packet(g, test_packet());
  const auto s = make_initial_data(psi0, zero_gauge(g), zero_gauge(g));
  CHECK(lorenz_residual(s) <= 1e-12);
  CHECK(gauge_reality_defect(s) < 1e-12);
  // Poisson oracle: with a_j = adot_j = 0, adot_0 = 0 and -|xi|^2 a_0 = -J_0 on nonzero modes.
  const auto j = current_source(s.psi);
  double err = 0.0, scale = 0.0;
  for (std::size_t p = 1; p < g->size(); ++p) {
    const double xi2 = g->xi_abs(p) * g->xi_abs(p);
    err = std::max(err, std::abs(-xi2 * s.A[0](p) + j[0](p)));
    scale = std::max(scale, std::abs(j[0](p)));
    CHECK(s.Adot[0](p) == cplx(0.0));
  }
  CHECK(err / scale < 1e-11);

  // Idempotence.
  const auto again = enforce_constraints(s);
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(std::sqrt((again.A[mu] - s.A[mu]).sum_squares()) <= 1e-13 * std::max(1.0, std::sqrt(s.A[mu].sum_squares())));
    CHECK(std::sqrt((again.Adot[mu] - s.Adot[mu]).sum_squares()) <= 1e-13);
  }
}

TEST_CASE("constraints with gauge packets") {
  const auto g = FourierGrid::create(16, 12.0);
  DataRecipe r;
  r.spinor = test_packet();
  r.a[1] = {0.01, 1.0, {0.0, 0.5, 0.0}, {0.5, 0.0, 0.0}};
  r.adot[2] = {0.02, 1.2, {0.0, 0.0, 0.0}, {0.0, 0.3, 0.0}};
  const auto s = make_initial_data(g, r);
  CHECK(lorenz_residual(s) <= 1e-12);
  // Condition (ii): i xi.adot = -|xi|^2 a_0 + J_0.
  const auto j = current_source(s.psi);
  double err = 0.0;
  for (std::size_t p = 1; p < g->size(); ++p) {
    const Vec3 xi = g->xi(p);
    cplx div = 0.0;
    for (int k = 0; k < 3; ++k) div += cplx(0.0, xi[k]) * s.Adot[k + 1](p);
    err = std::max(err, std::abs(div - (-dot(xi, xi) * s.A[0](p) + j[0](p))));
  }
  CHECK(err < 1e-11);
}

TEST_CASE("non-real gauge data is rejected") {
  const auto g = FourierGrid::create(8, 6.0);
  auto a = zero_gauge(g);
  a[2](1) = cplx(0.0, 1.0);
  CHECK_THROWS_AS(make_initial_data(SpinorField(g, Side::fourier), a, zero_gauge(g)), DomainError);
}

TEST_CASE("half-wave reconstruction") {
  const auto g = FourierGrid::create(16, 12.0);
  DataRecipe r;
  r.spinor = test_packet();
  r.a[3] = {0.02, 1.3, {0.1, 0.0, 0.0}, {0.0, 0.0, 0.7}};
  MDState s = make_initial_data(g, r);
  s.A[0](0) = 0.25;
  for (int mu = 0; mu < 4; ++mu) {
    const auto a = reconstruct_potential(half_wave(s, mu, 1), half_wave(s, mu, -1), s.A[mu](0));
    CHECK(rel_diff(a, s.A[mu]) < 1e-11);
  }
  CHECK(rel_diff(dirac_component(s, 1) + dirac_component(s, -1), s.psi) < 1e-14);
  // Profiles at t = 0 are the components themselves.
  CHECK(rel_diff(dirac_profile(s, 1), dirac_component(s, 1)) == 0.0);
}

TEST_CASE("packet construction") {
  const auto g = FourierGrid::create(16, 12.0);
  auto p = test_packet();
  const auto f = spinor_packet(g, p);
  CHECK(rel_diff(project_spinor(f, 1), f) < 1e-14);
  p.width = 0.0;
  CHECK_THROWS_AS(spinor_packet(g, p), DomainError);
  p = test_packet();
  p.polarization = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(spinor_packet(g, p), DomainError);
}

TEST_CASE("checkpoint round trip is bit exact") {
  const auto g = FourierGrid::create(8, 6.0);
  DataRecipe r;
  r.spinor = test_packet();
  MDState s = make_initial_data(g, r);
  s.t = 1.25;
  const auto path = std::filesystem::temp_directory_path() / "mdlab_test_roundtrip.ckpt";
  save_checkpoint(path, s, 42);
  const auto c = load_checkpoint(path, g);
  CHECK(c.step == 42);
  CHECK(c.state.t == 1.25);
  CHECK(rel_diff(c.state.psi, s.psi) == 0.0);
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(std::equal(s.A[mu].data().begin(), s.A[mu].data().end(), c.state.A[mu].data().begin()));
    CHECK(std::equal(s.Adot[mu].data().begin(), s.Adot[mu].data().end(), c.state.Adot[mu].data().begin()));
  }
  // Corruption is detected.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(200);
    f.put('\x7f');
  }
  CHECK_THROWS_AS(load_checkpoint(path, g), IoError);
  CHECK_THROWS_AS(load_checkpoint(path, FourierGrid::create(16, 6.0)), IoError);
  std::filesystem::remove(path);
}
