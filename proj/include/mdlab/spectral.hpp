#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <type_traits>
#include <vector>

#include "mdlab/field.hpp"

namespace mdlab {

/// Multiply each Fourier coefficient by m(xi).
///
/// Singular symbols (|xi|^{-1/2}, xi_j/|xi|, ...) are allowed to be non-finite
/// at xi = 0 only; the zero mode is then annihilated. A non-finite value at a
/// nonzero lattice point is a domain error.
template <int C, class Symbol>
Field<C> apply_multiplier(Field<C> f, Symbol&& m) {
  f.require(Side::fourier, "apply_multiplier");
  const FourierGrid& g = *f.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx v = cplx(m(g.xi(p)));
    cplx factor = v;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      if (p != 0) throw DomainError("apply_multiplier: symbol is not finite at a nonzero lattice point");
      factor = 0.0;
    }
    for (int c = 0; c < C; ++c) f(p, c) *= factor;
  }
  return f;
}

/// 2/3-rule truncation: zero every coefficient with some |m_j| > n/3.
template <int C>
Field<C> dealias(Field<C> f) {
  f.require(Side::fourier, "dealias");
  const FourierGrid& g = *f.grid();
  const int cut = g.n() / 3;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto m = g.mode(p);
    if (std::abs(m[0]) > cut || std::abs(m[1]) > cut || std::abs(m[2]) > cut) {
      for (int c = 0; c < C; ++c) f(p, c) = 0.0;
    }
  }
  return f;
}

/// True when the mode survives the 2/3 rule.
bool retained_by_dealias(const FourierGrid& g, std::size_t p);

/// Spectral derivative d/dx_j (j = 0, 1, 2) of a fourier-side field. The
/// Nyquist row along j is zeroed so that real fields stay real.
template <int C>
Field<C> derivative(Field<C> f, int j) {
  f.require(Side::fourier, "derivative");
  const FourierGrid& g = *f.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto m = g.mode(p);
    const cplx factor = (m[j] == -g.n() / 2) ? cplx(0.0) : cplx(0.0, g.lattice_spacing() * m[j]);
    for (int c = 0; c < C; ++c) f(p, c) *= factor;
  }
  return f;
}

/// Multiply a physical-side field by the box-centered coordinate x_j.
template <int C>
Field<C> multiply_by_coordinate(Field<C> f, int j) {
  f.require(Side::physical, "multiply_by_coordinate");
  const FourierGrid& g = *f.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double x = g.position(p)[j];
    for (int c = 0; c < C; ++c) f(p, c) *= x;
  }
  return f;
}

/// Fraction of the squared L^2 mass of f lying within `margin` of the box
/// boundary. Coordinate multiplication is only faithful when this is ~0.
template <int C>
double boundary_support_fraction(const Field<C>& f, double margin) {
  const Field<C> x = f.physical();
  const FourierGrid& g = *f.grid();
  const double edge = 0.5 * g.length() - margin;
  double near = 0.0;
  double total = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    double s = 0.0;
    for (int c = 0; c < C; ++c) s += std::norm(x(p, c));
    total += s;
    const Vec3 r = g.position(p);
    if (std::abs(r[0]) > edge || std::abs(r[1]) > edge || std::abs(r[2]) > edge) near += s;
  }
  return total > 0.0 ? near / total : 0.0;
}

/// Exact trigonometric evaluation of the low-pass parts P_{<=K} f of one or
/// more fourier-side scalar fields at arbitrary points.
///
/// Only modes with rho_{<=K}(eta) > 0, i.e. |eta| < 2^{K+1}, contribute. The
/// sum is organized row by row (m1, m2) so a point costs one complex
/// multiply-add per retained mode and field.
class LowpassSampler {
 public:
  static constexpr std::size_t default_budget = std::size_t{1} << 20;

  LowpassSampler(std::span<const ScalarField* const> fields, int K,
                 std::size_t budget = default_budget);

  std::size_t modes() const { return modes_; }
  std::size_t field_count() const { return nfields_; }
  int cutoff() const { return K_; }

  /// Writes one value per field into out. Returns true when x had to be
  /// wrapped into the box.
  bool evaluate(const Vec3& x, std::span<cplx> out) const;

 private:
  struct Row {
    int m1, m2;
    int lo, hi;              // m3 range
    std::size_t offset;      // into coef_, (hi - lo + 1) * nfields entries
  };

  GridPtr grid_;
  int K_;
  std::size_t nfields_ = 0;
  std::size_t modes_ = 0;
  int mmax_ = 0;
  std::vector<Row> rows_;
  std::vector<cplx> coef_;
};

struct LowpassValue {
  cplx value;
  bool wrapped;
};

/// (P_{<=K} f)(x) evaluated exactly from the Fourier coefficients of f.
/// Throws BudgetError when more than `budget` modes would be summed.
LowpassValue eval_lowpass_at_point(const ScalarField& f, int K, const Vec3& x,
                                   std::size_t budget = LowpassSampler::default_budget);

}  // namespace mdlab
