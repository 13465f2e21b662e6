#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "mdlab/errors.hpp"
#include "mdlab/grid.hpp"

namespace mdlab {

enum class Side { physical, fourier };

/// Complex field with C interleaved components on a FourierGrid.
///
/// Storage is point-major: component c of point p lives at data()[p * C + c].
/// Physical-side values are point samples; Fourier-side values are the
/// unscaled DFT of those samples (see FourierGrid::forward).
template <int C>
class Field {
 public:
  static constexpr int components = C;

  Field() = default;
  Field(GridPtr grid, Side side) : grid_(std::move(grid)), side_(side), data_(grid_->size() * C) {}

  static Field zeros(GridPtr grid, Side side) { return Field(std::move(grid), side); }

  const GridPtr& grid() const { return grid_; }
  Side side() const { return side_; }
  bool empty() const { return data_.empty(); }
  std::size_t points() const { return grid_->size(); }

  cplx& operator()(std::size_t p, int c = 0) { return data_[p * C + c]; }
  const cplx& operator()(std::size_t p, int c = 0) const { return data_[p * C + c]; }
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  Field& to_fourier() {
    if (side_ == Side::physical) {
      grid_->forward(data_, C);
      side_ = Side::fourier;
    }
    return *this;
  }
  Field& to_physical() {
    if (side_ == Side::fourier) {
      grid_->inverse(data_, C);
      side_ = Side::physical;
    }
    return *this;
  }
  Field fourier() const { return Field(*this).to_fourier(); }
  Field physical() const { return Field(*this).to_physical(); }

  void require(Side s, const char* what) const {
    if (side_ != s) {
      throw ContractError(std::string(what) + ": expected a " +
                          (s == Side::fourier ? "fourier" : "physical") + "-side field");
    }
  }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Field& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx s, Field a) { return a *= s; }

  /// Sum of squared magnitudes of the stored values.
  double sum_squares() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return s;
  }

  /// Largest pointwise magnitude (Euclidean over components).
  double sup_norm() const {
    double best = 0.0;
    for (std::size_t p = 0; p < points(); ++p) {
      double s = 0.0;
      for (int c = 0; c < C; ++c) s += std::norm(data_[p * C + c]);
      best = std::max(best, s);
    }
    return std::sqrt(best);
  }

 private:
  void check_compatible(const Field& o) const {
    if (grid_ != o.grid_ || side_ != o.side_) throw ContractError("fields live on different grids or sides");
  }

  GridPtr grid_;
  Side side_ = Side::physical;
  std::vector<cplx> data_;
};

using ScalarField = Field<1>;
using SpinorField = Field<4>;

/// Continuum L^2 norm: (sum |f(x)|^2 dx^3)^{1/2}. Fourier-side inputs use
/// Parseval, sum |f(x)|^2 = n^{-3} sum |f^(m)|^2, so both sides agree.
template <int C>
double l2_norm(const Field<C>& f) {
  const double dv = f.grid()->cell_volume();
  double s = f.sum_squares() * dv;
  if (f.side() == Side::fourier) s /= static_cast<double>(f.grid()->size());
  return std::sqrt(s);
}

/// Same as l2_norm but skipping the zero Fourier mode (fourier-side only).
template <int C>
double l2_norm_nonzero_modes(const Field<C>& f) {
  f.require(Side::fourier, "l2_norm_nonzero_modes");
  double s = f.sum_squares();
  for (int c = 0; c < C; ++c) s -= std::norm(f(0, c));
  s = std::max(s, 0.0) * f.grid()->cell_volume() / static_cast<double>(f.grid()->size());
  return std::sqrt(s);
}

/// Factor converting a stored DFT coefficient into an approximation of the
/// continuum Fourier transform int f(x) e^{-i x.xi} dx (up to a unimodular
/// phase from the box offset): the cell volume.
inline double continuum_ft_scale(const FourierGrid& g) { return g.cell_volume(); }

/// Largest deviation from Hermitian symmetry f^(-xi) = conj(f^(xi)), relative
/// to the largest coefficient. Nyquist rows are skipped.
double hermitian_defect(const ScalarField& f);

/// Largest |Im f(x)| relative to the largest |f(x)|.
double imaginary_fraction(const ScalarField& f);

/// Plane wave e^{i xi(m).x} u normalized to unit L^2 norm over the box,
/// returned on the Fourier side.
SpinorField unit_mode(GridPtr grid, const std::array<int, 3>& m, const std::array<cplx, 4>& u);
ScalarField unit_mode(GridPtr grid, const std::array<int, 3>& m);

}  // namespace mdlab
