#include <cmath>
#include <random>

#include "doctest.h"
#include "mdlab/errors.hpp"
#include "mdlab/resonance.hpp"

using namespace mdlab;

namespace {

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("phase values") {
  const Vec3 o{0, 0, 0};
  const Vec3 e1{1, 0, 0};
  CHECK(phase(PhaseKind::dirac, {1, 1, 1}, o, o) == doctest::Approx(0.0));
  CHECK(phase(PhaseKind::dirac, {1, -1, 1}, o, o) == doctest::Approx(2.0));
  CHECK(phase(PhaseKind::dirac, {1, 1, 1}, e1, e1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(phase(PhaseKind::dirac, {1, 0, 1}, o, o), DomainError);
}

TEST_CASE("eta-gradient at xi = eta") {
  const Vec3 e1{1, 0, 0};
  const Vec3 g = grad_eta(PhaseKind::dirac, {1, 1, 1}, e1, e1);
  CHECK(norm(g) == doctest::Approx(1.0));
  CHECK(g[0] == doctest::Approx(1.0));  // the derivative of +|eta| is +eta/|eta|
  // The space bound saturates: |grad| = 1 >= <xi - eta>^-2 = 1.
  CHECK(norm(g) >= 1.0 - 1e-15);
  CHECK_THROWS_AS(grad_eta(PhaseKind::dirac, {1, 1, 1}, e1, {0, 0, 0}), DomainError);
  for (int th : {1, -1}) {
    const Vec3 q = grad_eta(PhaseKind::maxwell, {1, th, th}, {0, 0, 0}, {0.3, -0.7, 1.2});
    CHECK(norm(q) < 1e-15);
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(3);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto sgn = all_sign_triples()[i % 8];
    const PhaseKind kind = i % 2 ? PhaseKind::dirac : PhaseKind::maxwell;
    const Vec3 xi = random_vec(rng, 3.0);
    Vec3 eta = random_vec(rng, 3.0);
    if (norm(eta) < 0.1) eta[0] += 0.5;
    const Vec3 g = grad_eta(kind, sgn, xi, eta);
    for (int j = 0; j < 3; ++j) {
      Vec3 a = eta, b = eta;
      a[j] += h;
      b[j] -= h;
      const double fd = (phase(kind, sgn, xi, a) - phase(kind, sgn, xi, b)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[j]));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("sign symmetry is exact") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Vec3 xi = random_vec(rng, 5.0);
    const Vec3 eta = random_vec(rng, 5.0);
    for (const auto& s : all_sign_triples()) {
      for (PhaseKind k : {PhaseKind::dirac, PhaseKind::maxwell}) {
        CHECK(phase(k, s.flipped(), xi, eta) == -phase(k, s, xi, eta));
      }
    }
  }
}

TEST_CASE("resonant set classification") {
  const auto d = classify_sets(PhaseKind::dirac, {1, 1, 1});
  CHECK(d.time == ResonantSet::eta_zero);
  CHECK(d.space == ResonantSet::empty);
  CHECK(d.space_time == ResonantSet::empty);
  CHECK(classify_sets(PhaseKind::dirac, {1, 1, -1}).time == ResonantSet::eta_zero);
  CHECK(classify_sets(PhaseKind::dirac, {1, -1, 1}).time == ResonantSet::empty);
  const auto m = classify_sets(PhaseKind::maxwell, {1, -1, -1});
  CHECK(m.time == ResonantSet::xi_zero);
  CHECK(m.space == ResonantSet::xi_zero);
  CHECK(m.space_time == ResonantSet::xi_zero);
  const auto n = classify_sets(PhaseKind::maxwell, {-1, 1, -1});
  CHECK(n.time == ResonantSet::empty);
  CHECK(n.space == ResonantSet::xi_minus_two_eta);
  CHECK(n.space_time == ResonantSet::empty);
  CHECK(distance_to_set(ResonantSet::xi_minus_two_eta, {-2, 0, 0}, {1, 0, 0}) == 0.0);
  // The classified space set is where the Maxwell gradient vanishes.
  const Vec3 g = grad_eta(PhaseKind::maxwell, {1, 1, -1}, {-2.0, 0.4, 0.0}, {1.0, -0.2, 0.0});
  CHECK(norm(g) < 1e-15);
}

TEST_CASE("lower bound scans") {
  SampleSpec spec;
  spec.samples = 20000;
  spec.seed = 9;
  const auto all = scan_all_bounds(spec);
  CHECK(all.size() == 32);
  for (const auto& b : all) {
    INFO(to_string(b.kind) << " " << to_string(b.signs) << " " << b.quantity);
    CHECK(b.min_ratio > 0.0);
    CHECK(b.positive);
    CHECK(b.consistent);
  }
  const auto dirac = scan_lower_bounds(PhaseKind::dirac, {1, 1, 1}, spec);
  // The time bound's minimizer sits near eta = 0.
  CHECK(dirac[0].quantity == "time");
  CHECK(norm(dirac[0].raw_argmin_eta) < 1e-2 * (1.0 + norm(dirac[0].raw_argmin_xi)));
  const auto off = scan_lower_bounds(PhaseKind::dirac, {1, -1, 1}, spec);
  MESSAGE("dirac (+,-,+) time bound constant " << off[0].min_ratio);
  CHECK(off[0].min_ratio > 0.1);
}

TEST_CASE("phase approximation") {
  const auto a = phase_approximation_scan(20000, 8.0, 1.0, 2);
  CHECK(a.samples == 20000);
  CHECK(a.max_ratio <= 1.1);
  CHECK(a.max_ratio > 0.1);
}
