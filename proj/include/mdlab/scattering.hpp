#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mdlab/dirac_algebra.hpp"
#include "mdlab/md_state.hpp"
#include "mdlab/spectral.hpp"

namespace mdlab {

/// Regularity and growth tables plus the small exponents of the main theorem.
struct PaperConstants {
  std::array<int, 4> N{70, 30, 20, 10};
  std::array<int, 4> H{1, 10, 210, 410};
  double delta = 1e-10;
  double zeta = 1050 * 1e-10;
  double delta_bar = 410 * 1e-10;

  /// Defaults derived from a given delta: zeta = 1050 delta, delta_bar = 410 delta.
  static PaperConstants with_delta(double delta);
  bool is_default() const;
};

/// Largest integer K with 2^K <= <s>^{-2/3 - 2 zeta}.
int cutoff_K(double s, const PaperConstants& c = {});

/// Scalar phase b_theta(t, xi) accumulated along the rays x = theta s xi/<xi>:
///
///   b_theta(t, xi) = int_0^t [A_0 + theta xi.A/<xi>](s, theta s xi/<xi>) ds
///
/// with A replaced by P_{<= K(s)} A and the integral taken by the trapezoid
/// rule over the accumulation times. Only modes kept by the 2/3 rule are
/// tracked (the others carry no spinor data); b is 0 elsewhere.
class PhaseCorrectionTable {
 public:
  PhaseCorrectionTable(GridPtr grid, PaperConstants constants = {},
                       std::size_t budget = LowpassSampler::default_budget);

  /// Adds the sample at state.t. The first call fixes the start time (b = 0
  /// there); later calls must have strictly increasing times.
  void accumulate(const MDState& state);

  bool started() const { return !times_.empty(); }
  double time() const;
  const std::vector<double>& times() const { return times_; }
  /// b_theta per Fourier point (FFT ordering).
  const std::vector<double>& b(int theta) const;
  /// True when the ray point of mode p left the box at some accumulated time.
  bool wrapped(std::size_t p, int theta) const;
  std::size_t wrapped_count() const;
  const GridPtr& grid() const { return grid_; }
  const PaperConstants& constants() const { return constants_; }

  /// The integrand [A_0 + theta xi.A/<xi>] at time s for every tracked mode
  /// (theta = +1; the theta = -1 values are g_+(-xi)).
  std::vector<double> integrand(const MDState& state, std::vector<std::uint8_t>& wrapped) const;

 private:
  GridPtr grid_;
  PaperConstants constants_;
  std::size_t budget_;
  std::vector<std::size_t> tracked_;
  std::vector<double> times_;
  std::vector<double> last_;      // theta = + integrand at the last time
  std::array<std::vector<double>, 2> b_;
  std::array<std::vector<std::uint8_t>, 2> wrapped_;
};

/// accumulate_phase as a free function.
void accumulate_phase(PhaseCorrectionTable& table, const MDState& state);

/// Psi_theta(t, xi) = e^{-i b_theta(t, xi)} phi^_theta(t, xi), Fourier side.
/// Throws ContractError when the table time differs from state.t.
SpinorField corrected_profile(const MDState& state, const PhaseCorrectionTable& table, int theta);

/// Matrix form Pi_theta(xi) alpha^mu c_mu of the correction symbol.
Mat4 correction_matrix(const Vec3& xi, int theta, const std::array<double, 4>& c, double mass = 1.0);

struct ShellTerm {
  int k;
  double sup_term;  // D: weighted Fourier sup; M: unused (0)
  double l2_term;   // D: weighted L2 part; M: the weighted j-sum
  double total;
};

struct NormReport {
  double value = 0.0;
  int k_min = 0, k_max = 0;
  std::vector<ShellTerm> shells;
};

/// |f^(xi)| in the continuum normalization: cell volume times the DFT value.
double continuum_fourier_abs(const FourierGrid& g, const cplx* v, int ncomp);

/// sup_k { <2^k>^20 2^{(1/2 - 1/100)k} ||rho_k phi^||_inf
///         + <2^k>^38 2^{-(1 - 1/100)k} ||P_k phi||_2 }
NormReport norm_D(const SpinorField& phi);

/// sup_k <2^k>^25 2^{(1 + 5 H(2) delta)k} sum_{j in U_k} 2^j ||Q_jk V||_2
NormReport norm_M(const ScalarField& v, const PaperConstants& c = {});

enum class ProfileKind { dirac, maxwell };

struct WeightedEnergyReport {
  double value = 0.0;
  std::vector<std::pair<int, double>> shells;  // (k, weighted term, max over l)
  double boundary_fraction = 0.0;
  bool boundary_flag = false;
};

/// sup_k <2^k>^{N(n+1)} w_k max_l ||rho_k d_{xi_l} f^||_{L^2_xi}
/// with w_k = <2^k> (dirac) or 2^{k/2} (maxwell), n in {0, 1, 2}. The xi
/// derivative is taken as the transform of -i x_l f, so
/// ||rho_k d_{xi_l} f^||_{L^2_xi} = (2 pi)^{3/2} ||P_k(x_l f)||_{L^2_x}.
template <int C>
WeightedEnergyReport weighted_energy(const Field<C>& f, int n, ProfileKind kind, const PaperConstants& c = {});

/// Profiles and phases captured at one time for drift metrics.
struct ScatteringSnapshot {
  double t = 0.0;
  std::array<SpinorField, 2> phi;         // theta = +, -
  std::array<SpinorField, 2> psi_corr;    // theta = +, -
  std::array<std::array<ScalarField, 2>, 4> V;  // [mu][theta' = +, -]
  std::array<std::vector<std::uint8_t>, 2> excluded;  // wrapped rays
};

ScatteringSnapshot capture_snapshot(const MDState& state, const PhaseCorrectionTable& table);

struct DriftSpec {
  int k_lo = -3;
  int k_hi = 2;
  std::size_t top_modes = 10;
};

struct ShellDrift {
  int k;
  double uncorrected;
  double corrected;
};

struct ModeDrift {
  std::array<int, 3> mode;
  double amplitude;
  double modulus_drift;
  double argument_drift;
};

struct MaxwellShellDrift {
  int k;
  int mu;
  int theta_prime;
  double drift;
};

struct DriftReport {
  double t1 = 0.0, t2 = 0.0;
  double uncorrected = 0.0;  // (a)
  double corrected = 0.0;    // (b)
  double ratio = 0.0;        // (b) / (a)
  std::vector<ShellDrift> shells;
  std::vector<ModeDrift> modes;  // (c)
  std::vector<MaxwellShellDrift> maxwell;  // (d)
  double maxwell_sup = 0.0;
  std::size_t excluded_modes = 0;
};

/// Drift metrics between two snapshots (t1 <= t2, else DomainError).
DriftReport drift_report(const ScatteringSnapshot& s1, const ScatteringSnapshot& s2, const DriftSpec& spec = {});

/// Sum over j in U_k of 2^j ||Q_jk v||_2 (the Maxwell shell quantity).
double maxwell_shell_sum(const ScalarField& v, int k);

}  // namespace mdlab
