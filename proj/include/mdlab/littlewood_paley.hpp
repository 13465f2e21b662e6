#pragma once

#include <utility>
#include <vector>

#include "mdlab/field.hpp"

namespace mdlab::lp {

/// Radial bump rho(r): 1 for r <= 1, 0 for r >= 2, smooth in between.
///
///   rho(r) = s(2 - r),  s(u) = e^{-1/u} / (e^{-1/u} + e^{-1/(1-u)})
///
/// with s clamped to 0 for u <= 0 and 1 for u >= 1. Every norm in this
/// library is computed from exactly this profile.
double bump(double r);

/// rho_k(r) = rho(r / 2^k) - rho(r / 2^{k-1}), supported in [2^{k-1}, 2^{k+1}].
double shell(int k, double r);
/// rho_{<=k}(r) = rho(r / 2^k).
double below(int k, double r);
/// rho_{>k}(r) = 1 - rho(r / 2^k).
double above(int k, double r);
/// Widened shell rho_{[k-2, k+2]}.
double widened(int k, double r);

/// Result of a dyadic projection. Out-of-range shells give an all-zero field
/// with in_range = false.
template <int C>
struct Projection {
  Field<C> field;
  bool in_range;
};

/// P_k f. Input may be on either side; the result is on the same side.
template <int C>
Projection<C> project_shell(const Field<C>& f, int k);
template <int C>
Field<C> project_below(const Field<C>& f, int k);
template <int C>
Field<C> project_above(const Field<C>& f, int k);
template <int C>
Projection<C> project_widened(const Field<C>& f, int k);

/// Phase-space index set U_k = {j : j >= -min(k, 0)} truncated to the box:
/// returns [j_min, j_max] where cutoffs beyond j_max vanish on every grid point.
std::pair<int, int> spatial_index_range(const FourierGrid& g, int k);
bool in_index_set(int j, int k);

/// Spatial cutoff rho-bar_j^{(k)}(|x|) (|x| is the distance to the box center).
double spatial_cutoff(int j, int k, double r);

/// Q_{jk} f = rho-bar_j^{(k)} P_k f, returned on the physical side.
/// Throws DomainError when j is not in U_k.
template <int C>
Field<C> localize_qjk(const Field<C>& f, int j, int k);

/// Apply the spatial cutoff to an already shell-projected physical field.
template <int C>
Field<C> apply_spatial_cutoff(Field<C> shell_part, int j, int k);

}  // namespace mdlab::lp
