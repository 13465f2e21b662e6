#include "mdlab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mdlab::lp {

namespace {

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

template <int C, class Weight>
Field<C> apply_radial(const Field<C>& f, Weight&& w) {
  Field<C> out = f.fourier();
  const FourierGrid& g = *f.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double s = w(g.xi_abs(p));
    for (int c = 0; c < C; ++c) out(p, c) *= s;
  }
  if (f.side() == Side::physical) out.to_physical();
  return out;
}

bool shell_in_range(const FourierGrid& g, int k) {
  const auto [lo, hi] = g.dyadic_range();
  return k >= lo && k <= hi;
}

}  // namespace

double bump(double r) { return smooth_step(2.0 - r); }

double shell(int k, double r) { return bump(std::ldexp(r, -k)) - bump(std::ldexp(r, 1 - k)); }

double below(int k, double r) { return bump(std::ldexp(r, -k)); }

double above(int k, double r) { return 1.0 - below(k, r); }

double widened(int k, double r) { return below(k + 2, r) - below(k - 3, r); }

template <int C>
Projection<C> project_shell(const Field<C>& f, int k) {
  if (!shell_in_range(*f.grid(), k)) return {Field<C>(f.grid(), f.side()), false};
  return {apply_radial(f, [k](double r) { return shell(k, r); }), true};
}

template <int C>
Field<C> project_below(const Field<C>& f, int k) {
  return apply_radial(f, [k](double r) { return below(k, r); });
}

template <int C>
Field<C> project_above(const Field<C>& f, int k) {
  return apply_radial(f, [k](double r) { return above(k, r); });
}

template <int C>
Projection<C> project_widened(const Field<C>& f, int k) {
  if (!shell_in_range(*f.grid(), k)) return {Field<C>(f.grid(), f.side()), false};
  return {apply_radial(f, [k](double r) { return widened(k, r); }), true};
}

bool in_index_set(int j, int k) { return j >= -std::min(k, 0); }

std::pair<int, int> spatial_index_range(const FourierGrid& g, int k) {
  const int j_min = -std::min(k, 0);
  return {j_min, std::max(j_min, g.spatial_dyadic_max())};
}

double spatial_cutoff(int j, int k, double r) {
  if (!in_index_set(j, k)) return 0.0;
  // The innermost index carries the whole ball; the rest are annuli.
  if (j == -std::min(k, 0)) return below(j, r);
  return shell(j, r);
}

template <int C>
Field<C> apply_spatial_cutoff(Field<C> shell_part, int j, int k) {
  shell_part.require(Side::physical, "apply_spatial_cutoff");
  const FourierGrid& g = *shell_part.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double w = spatial_cutoff(j, k, g.radius(p));
    for (int c = 0; c < C; ++c) shell_part(p, c) *= w;
  }
  return shell_part;
}

template <int C>
Field<C> localize_qjk(const Field<C>& f, int j, int k) {
  if (!in_index_set(j, k)) {
    throw DomainError("localize_qjk: j = " + std::to_string(j) + " is not in U_k for k = " +
                      std::to_string(k));
  }
  Field<C> shell_part = project_shell(f, k).field;
  shell_part.to_physical();
  return apply_spatial_cutoff(std::move(shell_part), j, k);
}

template Projection<1> project_shell(const Field<1>&, int);
template Projection<4> project_shell(const Field<4>&, int);
template Field<1> project_below(const Field<1>&, int);
template Field<4> project_below(const Field<4>&, int);
template Field<1> project_above(const Field<1>&, int);
template Field<4> project_above(const Field<4>&, int);
template Projection<1> project_widened(const Field<1>&, int);
template Projection<4> project_widened(const Field<4>&, int);
template Field<1> localize_qjk(const Field<1>&, int, int);
template Field<4> localize_qjk(const Field<4>&, int, int);
template Field<1> apply_spatial_cutoff(Field<1>, int, int);
template Field<4> apply_spatial_cutoff(Field<4>, int, int);

}  // namespace mdlab::lp
