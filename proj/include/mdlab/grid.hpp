#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace mdlab {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Japanese bracket <r> = (1 + r^2)^{1/2}.
inline double japanese(double r) { return std::sqrt(1.0 + r * r); }
inline double japanese(const Vec3& v) { return std::sqrt(1.0 + dot(v, v)); }

class FftEngine;

/// Periodic cube [-L/2, L/2)^3 sampled on n^3 points, with its dual lattice
/// xi(m) = 2 pi m / L, m_j in [-n/2, n/2).
///
/// Grid index i along an axis maps to the coordinate x = -L/2 + i L/n, so the
/// box center x = 0 sits at index n/2. Fourier arrays use the FFTW ordering
/// (index i carries wavenumber m = i for i < n/2 and i - n otherwise).
///
/// The grid owns the FFT plans and a cache of |xi| and <xi>_m. Grids are
/// immutable after construction and shared by pointer between fields.
class FourierGrid {
 public:
  static std::shared_ptr<const FourierGrid> create(int n, double length, double mass = 1.0);
  ~FourierGrid();

  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  int n() const { return n_; }
  double length() const { return length_; }
  double mass() const { return mass_; }
  std::size_t size() const { return size_; }
  double spacing() const { return length_ / n_; }
  double cell_volume() const { return std::pow(spacing(), 3); }
  double lattice_spacing() const { return 2.0 * M_PI / length_; }
  /// Largest representable wavenumber along one axis, pi n / L.
  double xi_max() const { return M_PI * n_ / length_; }

  std::size_t flat(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  std::array<int, 3> unflat(std::size_t p) const {
    const int k = static_cast<int>(p % n_);
    const int j = static_cast<int>((p / n_) % n_);
    const int i = static_cast<int>(p / (static_cast<std::size_t>(n_) * n_));
    return {i, j, k};
  }

  /// Signed wavenumber index of FFT slot i.
  int mode_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  /// FFT slot holding signed wavenumber index m (taken modulo n).
  int slot(int m) const { return ((m % n_) + n_) % n_; }
  double wavenumber(int i) const { return lattice_spacing() * mode_index(i); }
  std::array<int, 3> mode(std::size_t p) const;
  Vec3 xi(std::size_t p) const;
  double xi_abs(std::size_t p) const { return xi_abs_[p]; }
  /// <xi>_m = (m^2 + |xi|^2)^{1/2} with the grid's mass.
  double dirac_energy(std::size_t p) const { return energy_[p]; }
  bool is_nyquist(std::size_t p) const;
  /// Index of the mode -xi (wraps the Nyquist row onto itself).
  std::size_t mirror(std::size_t p) const;

  double coordinate(int i) const { return -0.5 * length_ + i * spacing(); }
  Vec3 position(std::size_t p) const;
  /// Distance from the box center.
  double radius(std::size_t p) const { return norm(position(p)); }
  /// Largest |x| over grid points (the box corner).
  double max_radius() const;
  /// Largest |xi| over lattice points (the Fourier corner).
  double max_xi_abs() const;

  /// Dyadic shells k_min..k_max that tile the nonzero lattice: P_{<= k_min - 1}
  /// keeps only the zero mode and rho_{<= k_max} = 1 on every lattice point.
  std::pair<int, int> dyadic_range() const;
  /// Largest j for which the spatial cutoffs can be nonzero inside the box.
  int spatial_dyadic_max() const;

  /// In-place FFTs on arrays of n^3 points with ncomp interleaved components
  /// (point-major). Forward is unscaled; inverse carries 1/n^3.
  void forward(std::span<cplx> data, int ncomp) const;
  void inverse(std::span<cplx> data, int ncomp) const;

 private:
  FourierGrid(int n, double length, double mass);

  int n_;
  double length_;
  double mass_;
  std::size_t size_;
  std::vector<double> xi_abs_;
  std::vector<double> energy_;
  std::unique_ptr<FftEngine> fft_;
};

using GridPtr = std::shared_ptr<const FourierGrid>;

/// Number of worker threads requested through MDLAB_THREADS (default 1).
int configured_threads();

}  // namespace mdlab
