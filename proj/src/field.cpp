#include "mdlab/field.hpp"

namespace mdlab {

double hermitian_defect(const ScalarField& f) {
  f.require(Side::fourier, "hermitian_defect");
  const FourierGrid& g = *f.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    scale = std::max(scale, std::abs(f(p)));
    if (g.is_nyquist(p)) continue;
    worst = std::max(worst, std::abs(f(g.mirror(p)) - std::conj(f(p))));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

double imaginary_fraction(const ScalarField& f) {
  const ScalarField x = f.physical();
  double im = 0.0;
  double scale = 0.0;
  for (std::size_t p = 0; p < x.points(); ++p) {
    im = std::max(im, std::abs(x(p).imag()));
    scale = std::max(scale, std::abs(x(p)));
  }
  return scale > 0.0 ? im / scale : 0.0;
}

namespace {

double unit_mode_amplitude(const FourierGrid& g) {
  // A single coefficient c gives |f(x)| = c / n^3; unit L^2 norm needs
  // (c / n^3)^2 L^3 = 1.
  return static_cast<double>(g.size()) / std::pow(g.length(), 1.5);
}

}  // namespace

SpinorField unit_mode(GridPtr grid, const std::array<int, 3>& m, const std::array<cplx, 4>& u) {
  SpinorField f(grid, Side::fourier);
  const FourierGrid& g = *grid;
  double un = 0.0;
  for (const auto& c : u) un += std::norm(c);
  un = std::sqrt(un);
  if (un == 0.0) throw DomainError("unit_mode: zero spinor");
  const std::size_t p = g.flat(g.slot(m[0]), g.slot(m[1]), g.slot(m[2]));
  const double a = unit_mode_amplitude(g) / un;
  for (int c = 0; c < 4; ++c) f(p, c) = a * u[c];
  return f;
}

ScalarField unit_mode(GridPtr grid, const std::array<int, 3>& m) {
  ScalarField f(grid, Side::fourier);
  const FourierGrid& g = *grid;
  f(g.flat(g.slot(m[0]), g.slot(m[1]), g.slot(m[2]))) = unit_mode_amplitude(g);
  return f;
}

}  // namespace mdlab
