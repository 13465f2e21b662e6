#pragma once

#include <cmath>
#include <random>

#include "mdlab/field.hpp"
#include "mdlab/spectral.hpp"

namespace mdlab::testing {

/// Random Fourier coefficients on |m_j| <= band (physical data is complex).
template <int C>
Field<C> random_band_limited(const GridPtr& g, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Field<C> f(g, Side::fourier);
  for (std::size_t p = 0; p < g->size(); ++p) {
    const auto m = g->mode(p);
    if (std::abs(m[0]) > band || std::abs(m[1]) > band || std::abs(m[2]) > band) continue;
    for (int c = 0; c < C; ++c) f(p, c) = cplx(nd(rng), nd(rng));
  }
  return f;
}

/// exp(-|x - x0|^2 / (2 w^2)) on every component, physical side.
template <int C>
Field<C> gaussian(const GridPtr& g, double w, const Vec3& x0 = {0.0, 0.0, 0.0}) {
  Field<C> f(g, Side::physical);
  for (std::size_t p = 0; p < g->size(); ++p) {
    const Vec3 x = g->position(p);
    double r2 = 0.0;
    for (int j = 0; j < 3; ++j) r2 += (x[j] - x0[j]) * (x[j] - x0[j]);
    for (int c = 0; c < C; ++c) f(p, c) = std::exp(-0.5 * r2 / (w * w));
  }
  return f;
}

template <int C>
double rel_diff(const Field<C>& a, const Field<C>& b) {
  const Field<C> pa = a.physical();
  const Field<C> pb = b.physical();
  return std::sqrt((pa - pb).sum_squares() / std::max(pb.sum_squares(), 1e-300));
}

}  // namespace mdlab::testing
