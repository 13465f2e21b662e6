#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdlab/grid.hpp"

namespace mdlab {

enum class PhaseKind { dirac, maxwell };

/// Signs (theta, theta_1, theta_2), each +1 or -1.
struct SignTriple {
  int theta = 1;
  int theta1 = 1;
  int theta2 = 1;

  SignTriple flipped() const { return {-theta, -theta1, -theta2}; }
};

std::string to_string(PhaseKind k);
std::string to_string(const SignTriple& s);
/// All eight sign triples in a fixed order.
std::vector<SignTriple> all_sign_triples();

/// dirac:   p(xi, eta) = theta <xi> - theta_1 <xi - eta> + theta_2 |eta|
/// maxwell: q(xi, eta) = -theta |xi| + theta_1 <eta> - theta_2 <xi + eta>
double phase(PhaseKind kind, const SignTriple& s, const Vec3& xi, const Vec3& eta, double mass = 1.0);

/// Gradient in eta:
///   dirac:   theta_1 (xi - eta)/<xi - eta> + theta_2 eta/|eta|   (eta != 0)
///   maxwell: theta_1 eta/<eta> - theta_2 (xi + eta)/<xi + eta>
Vec3 grad_eta(PhaseKind kind, const SignTriple& s, const Vec3& xi, const Vec3& eta, double mass = 1.0);

enum class ResonantSet { empty, eta_zero, xi_zero, xi_minus_two_eta };
std::string to_string(ResonantSet r);

struct Classification {
  ResonantSet time;
  ResonantSet space;
  ResonantSet space_time;
};

Classification classify_sets(PhaseKind kind, const SignTriple& s);

/// Euclidean distance in (xi, eta) space to the set (0 for `empty` is
/// meaningless and returns +inf).
double distance_to_set(ResonantSet r, const Vec3& xi, const Vec3& eta);

struct SampleSpec {
  std::uint64_t samples = 100000;
  double min_radius = 1.0 / 1024.0;
  double max_radius = 1024.0;
  /// Radius bound of the compact sub-sample used to locate the minimum of
  /// the raw quantity.
  double compact_radius = 8.0;
  /// Fraction of samples drawn near each candidate set {eta = 0}, {xi = 0},
  /// {xi = -2 eta}.
  double stratified_fraction = 0.15;
  std::uint64_t seed = 1;
};

struct BoundResult {
  PhaseKind kind;
  SignTriple signs;
  std::string quantity;  // "time" (the phase) or "space" (its eta-gradient)
  std::string comparator;
  ResonantSet classified;
  std::uint64_t samples = 0;
  /// inf |LHS| / comparator: the empirical constant of the lower bound.
  double min_ratio = 0.0;
  Vec3 ratio_argmin_xi{}, ratio_argmin_eta{};
  /// min |LHS| over the compact sub-sample and where it occurs.
  double raw_min = 0.0;
  Vec3 raw_argmin_xi{}, raw_argmin_eta{};
  /// Relative distance of raw_argmin to the classified set (inf if empty).
  double argmin_distance = 0.0;
  bool positive = false;
  bool consistent = false;
};

/// Scans both lower bounds (phase and gradient) for one kind and sign triple.
std::vector<BoundResult> scan_lower_bounds(PhaseKind kind, const SignTriple& s, const SampleSpec& spec);

/// All kinds and sign triples.
std::vector<BoundResult> scan_all_bounds(const SampleSpec& spec);

/// sup |theta<xi> - theta<xi - eta> - theta xi.eta/<xi>| / |eta|^2 over
/// |xi| <= xi_max, 0 < |eta| <= eta_max.
struct ApproximationScan {
  double max_ratio = 0.0;
  Vec3 argmax_xi{}, argmax_eta{};
  std::uint64_t samples = 0;
};
ApproximationScan phase_approximation_scan(std::uint64_t samples, double xi_max, double eta_max,
                                           std::uint64_t seed, double mass = 1.0);

}  // namespace mdlab
