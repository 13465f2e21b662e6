#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "mdlab/field.hpp"

namespace mdlab {

/// Coupled Maxwell-Dirac state on the torus.
///
/// All fields are stored on the Fourier side. The zero Fourier entries of A
/// and Adot are the zero-mode registers: they obey A''(0) = mean J and are
/// never touched by |D|-type multipliers.
struct MDState {
  double t = 0.0;
  SpinorField psi;
  std::array<ScalarField, 4> A;
  std::array<ScalarField, 4> Adot;

  static MDState vacuum(GridPtr grid);
  const GridPtr& grid() const { return psi.grid(); }
};

struct ZeroModes {
  std::array<cplx, 4> a;
  std::array<cplx, 4> adot;
};

ZeroModes zero_modes(const MDState& s);

/// J_mu = <psi, alpha_mu psi> pointwise, returned on the physical side.
/// J_0 = -|psi|^2, J_j = psi^dagger alpha^j psi.
std::array<ScalarField, 4> current(const SpinorField& psi);

/// Fourier-side, dealiased current with exactly real physical values. This is
/// the source used by the evolution and by the constraint projection.
std::array<ScalarField, 4> current_source(const SpinorField& psi);

/// ||d^mu A_mu|| / max(||A_0'|| + ||div A||, floor) over nonzero modes.
double lorenz_residual(const MDState& s, double floor = 1e-300);

/// ||psi||_2.
double charge(const MDState& s);

/// Largest Hermitian defect over the eight gauge components.
double gauge_reality_defect(const MDState& s);

/// Gaussian-enveloped spinor
///
///   psi0(x) = amplitude exp(-|x - center|^2 / (2 width^2)) e^{i k.x} u / |u|
///
/// optionally projected onto one branch (branch = +1 or -1, 0 keeps both).
struct SpinorPacket {
  double amplitude = 0.0;
  double width = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 momentum{0.0, 0.0, 0.0};
  std::array<cplx, 4> polarization{1.0, 0.0, 0.0, 0.0};
  int branch = 1;
};

/// Real Gaussian a(x) = amplitude exp(-|x - center|^2 / (2 width^2)) cos(k.x).
struct ScalarPacket {
  double amplitude = 0.0;
  double width = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 wavevector{0.0, 0.0, 0.0};
};

struct DataRecipe {
  SpinorPacket spinor;
  std::array<ScalarPacket, 4> a;
  std::array<ScalarPacket, 4> adot;
};

SpinorField spinor_packet(GridPtr grid, const SpinorPacket& p);
ScalarField scalar_packet(GridPtr grid, const ScalarPacket& p);

/// Builds the t = 0 state from a recipe and projects it onto the constraint
/// set (see enforce_constraints).
MDState make_initial_data(GridPtr grid, const DataRecipe& recipe);

/// Same from explicit fields (any side). Gauge data must be real; a
/// non-Hermitian spectrum is rejected with a DomainError.
MDState make_initial_data(const SpinorField& psi0, const std::array<ScalarField, 4>& a,
                          const std::array<ScalarField, 4>& adot);

/// Imposes, on nonzero modes,
///   (i)  a0' = div a
///   (ii) a0  = Laplacian^{-1}(div a' - J_0)
/// which make d^mu A_mu = 0 propagate. The zero mode of a0' is set to 0 and
/// the zero mode of a0 is kept. Idempotent.
MDState enforce_constraints(MDState s);

/// Half wave W_{mu,theta'} = |D|^{1/2} A_{mu,theta'} with
/// A_{mu,theta'} = (A_mu - i theta' |D|^{-1} A_mu') / 2, zero mode removed.
ScalarField half_wave(const MDState& s, int mu, int theta_prime);
/// V_{mu,theta'} = e^{-theta' i t |D|} W_{mu,theta'}.
ScalarField wave_profile(const MDState& s, int mu, int theta_prime);
/// A_mu rebuilt from |D|^{-1/2}(W_+ + W_-) plus the zero-mode register.
ScalarField reconstruct_potential(const ScalarField& w_plus, const ScalarField& w_minus, cplx zero_mode);
/// psi_theta = Pi_theta psi (Fourier side).
SpinorField dirac_component(const MDState& s, int theta);
/// phi_theta = e^{theta i t <D>} Pi_theta psi (Fourier side).
SpinorField dirac_profile(const MDState& s, int theta);

/// Binary checkpoint: magic, format version, grid descriptor, step counter,
/// t, raw arrays, zero-mode registers and a checksum. Round trip is bit-exact.
struct Checkpoint {
  MDState state;
  std::uint64_t step = 0;
};

inline constexpr std::uint32_t checkpoint_version = 1;

void save_checkpoint(const std::filesystem::path& path, const MDState& s, std::uint64_t step);
/// Reads a checkpoint. When grid is given it must match the stored
/// descriptor and is reused; otherwise a new grid is created.
Checkpoint load_checkpoint(const std::filesystem::path& path, GridPtr grid = nullptr);

}  // namespace mdlab
