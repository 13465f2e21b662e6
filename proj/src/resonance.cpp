#include "mdlab/resonance.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "mdlab/dirac_algebra.hpp"
#include "mdlab/errors.hpp"

namespace mdlab {

namespace {

double bracket(const Vec3& v, double m) { return std::sqrt(m * m + dot(v, v)); }

void check_signs(const SignTriple& s) {
  check_sign(s.theta);
  check_sign(s.theta1);
  check_sign(s.theta2);
}

// <a> - <b> without cancellation.
double bracket_difference(const Vec3& a, const Vec3& b, double m) {
  const double num = (dot(a, a) - dot(b, b));
  return num / (bracket(a, m) + bracket(b, m));
}

// Same value as phase(), evaluated so that nearly cancelling brackets are
// differenced analytically.
double stable_phase(PhaseKind kind, const SignTriple& s, const Vec3& xi, const Vec3& eta, double m) {
  if (kind == PhaseKind::dirac) {
    const Vec3 d = xi - eta;
    const double brackets = s.theta == s.theta1 ? s.theta * bracket_difference(xi, d, m)
                                                : s.theta * bracket(xi, m) - s.theta1 * bracket(d, m);
    return brackets + s.theta2 * norm(eta);
  }
  const Vec3 sum = xi + eta;
  const double brackets = s.theta1 == s.theta2 ? s.theta1 * bracket_difference(eta, sum, m)
                                               : s.theta1 * bracket(eta, m) - s.theta2 * bracket(sum, m);
  return -s.theta * norm(xi) + brackets;
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    const Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    const double r = norm(v);
    if (r > 1e-12) return (1.0 / r) * v;
  }
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

struct Bound {
  std::string quantity;
  std::string comparator;
  ResonantSet classified;
  std::function<double(const Vec3&, const Vec3&)> lhs;
  std::function<double(const Vec3&, const Vec3&)> rhs;
};

std::vector<Bound> bounds_for(PhaseKind kind, const SignTriple& s, double m) {
  const Classification c = classify_sets(kind, s);
  auto time_lhs = [=](const Vec3& xi, const Vec3& eta) { return std::abs(stable_phase(kind, s, xi, eta, m)); };
  auto space_lhs = [=](const Vec3& xi, const Vec3& eta) { return norm(grad_eta(kind, s, xi, eta, m)); };
  std::vector<Bound> out;
  if (kind == PhaseKind::dirac) {
    if (s.theta == s.theta1) {
      out.push_back({"time", "|eta| / (<xi> (<xi> + <xi-eta> + <eta>))", c.time, time_lhs,
                     [m](const Vec3& xi, const Vec3& eta) {
                       const double bx = bracket(xi, m);
                       return norm(eta) / (bx * (bx + bracket(xi - eta, m) + bracket(eta, m)));
                     }});
    } else {
      out.push_back({"time", "<xi>^-1", c.time, time_lhs,
                     [m](const Vec3& xi, const Vec3&) { return 1.0 / bracket(xi, m); }});
    }
    out.push_back({"space", "<xi-eta>^-2", c.space, space_lhs, [m](const Vec3& xi, const Vec3& eta) {
                     const double b = bracket(xi - eta, m);
                     return 1.0 / (b * b);
                   }});
  } else {
    if (s.theta1 == s.theta2) {
      out.push_back({"time", "|xi| / (<eta> (<xi> + <xi-eta> + <eta>))", c.time, time_lhs,
                     [m](const Vec3& xi, const Vec3& eta) {
                       const double be = bracket(eta, m);
                       return norm(xi) / (be * (bracket(xi, m) + bracket(xi - eta, m) + be));
                     }});
      out.push_back({"space", "|xi| / <xi+eta>^3", c.space, space_lhs, [m](const Vec3& xi, const Vec3& eta) {
                       const double b = bracket(xi + eta, m);
                       return norm(xi) / (b * b * b);
                     }});
    } else {
      out.push_back({"time", "<eta>^-1", c.time, time_lhs,
                     [m](const Vec3&, const Vec3& eta) { return 1.0 / bracket(eta, m); }});
      out.push_back({"space", "|eta/<eta> + (xi+eta)/<xi+eta>|", c.space, space_lhs,
                     [m](const Vec3& xi, const Vec3& eta) {
                       const Vec3 sum = xi + eta;
                       return norm((1.0 / bracket(eta, m)) * eta + (1.0 / bracket(sum, m)) * sum);
                     }});
    }
  }
  return out;
}

// Relative distance used to judge whether a minimizer sits on a set.
double relative_distance(ResonantSet r, const Vec3& xi, const Vec3& eta) {
  return distance_to_set(r, xi, eta) / (1.0 + norm(xi) + norm(eta));
}

// Thresholds for the consistency verdict: the raw minimum must sit within
// this relative distance of a nonempty classified set, and must stay above
// the floor on the compact sub-sample when the set is empty.
constexpr double on_set_tolerance = 1e-2;
constexpr double empty_set_floor = 1e-3;

}  // namespace

std::string to_string(PhaseKind k) { return k == PhaseKind::dirac ? "dirac" : "maxwell"; }

std::string to_string(const SignTriple& s) {
  auto c = [](int v) { return v > 0 ? '+' : '-'; };
  return std::string("(") + c(s.theta) + "," + c(s.theta1) + "," + c(s.theta2) + ")";
}

std::vector<SignTriple> all_sign_triples() {
  std::vector<SignTriple> out;
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int c : {1, -1}) out.push_back({a, b, c});
  return out;
}

std::string to_string(ResonantSet r) {
  switch (r) {
    case ResonantSet::empty: return "empty";
    case ResonantSet::eta_zero: return "{eta=0}";
    case ResonantSet::xi_zero: return "{xi=0}";
    case ResonantSet::xi_minus_two_eta: return "{xi=-2eta}";
  }
  return "?";
}

double phase(PhaseKind kind, const SignTriple& s, const Vec3& xi, const Vec3& eta, double mass) {
  check_signs(s);
  if (kind == PhaseKind::dirac) {
    return s.theta * bracket(xi, mass) - s.theta1 * bracket(xi - eta, mass) + s.theta2 * norm(eta);
  }
  return -s.theta * norm(xi) + s.theta1 * bracket(eta, mass) - s.theta2 * bracket(xi + eta, mass);
}

Vec3 grad_eta(PhaseKind kind, const SignTriple& s, const Vec3& xi, const Vec3& eta, double mass) {
  check_signs(s);
  if (kind == PhaseKind::dirac) {
    const double r = norm(eta);
    if (r == 0.0) throw DomainError("grad_eta: |eta| is not differentiable at eta = 0");
    const Vec3 d = xi - eta;
    return (s.theta1 / bracket(d, mass)) * d + (s.theta2 / r) * eta;
  }
  const Vec3 sum = xi + eta;
  return (s.theta1 / bracket(eta, mass)) * eta - (s.theta2 / bracket(sum, mass)) * sum;
}

Classification classify_sets(PhaseKind kind, const SignTriple& s) {
  check_signs(s);
  if (kind == PhaseKind::dirac) {
    const ResonantSet t = s.theta == s.theta1 ? ResonantSet::eta_zero : ResonantSet::empty;
    return {t, ResonantSet::empty, ResonantSet::empty};
  }
  if (s.theta1 == s.theta2) return {ResonantSet::xi_zero, ResonantSet::xi_zero, ResonantSet::xi_zero};
  return {ResonantSet::empty, ResonantSet::xi_minus_two_eta, ResonantSet::empty};
}

double distance_to_set(ResonantSet r, const Vec3& xi, const Vec3& eta) {
  switch (r) {
    case ResonantSet::empty: return std::numeric_limits<double>::infinity();
    case ResonantSet::eta_zero: return norm(eta);
    case ResonantSet::xi_zero: return norm(xi);
    case ResonantSet::xi_minus_two_eta: return norm(xi + 2.0 * eta) / std::sqrt(5.0);
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<BoundResult> scan_lower_bounds(PhaseKind kind, const SignTriple& s, const SampleSpec& spec) {
  check_signs(s);
  if (spec.min_radius <= 0.0 || spec.max_radius <= spec.min_radius) {
    throw DomainError("scan_lower_bounds: invalid radius range");
  }
  const double m = 1.0;
  const auto bounds = bounds_for(kind, s, m);
  std::vector<BoundResult> res(bounds.size());
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    res[b].kind = kind;
    res[b].signs = s;
    res[b].quantity = bounds[b].quantity;
    res[b].comparator = bounds[b].comparator;
    res[b].classified = bounds[b].classified;
    res[b].min_ratio = std::numeric_limits<double>::infinity();
    res[b].raw_min = std::numeric_limits<double>::infinity();
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double f = std::clamp(spec.stratified_fraction, 0.0, 1.0 / 3.0);
  const double near_hi = 0.25;

  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const double u = unit(rng);
    Vec3 xi = log_uniform(rng, spec.min_radius, spec.max_radius) * random_direction(rng);
    Vec3 eta = log_uniform(rng, spec.min_radius, spec.max_radius) * random_direction(rng);
    const double eps = log_uniform(rng, spec.min_radius, near_hi);
    const Vec3 dir = random_direction(rng);
    if (u < f) {
      eta = eps * dir;
    } else if (u < 2.0 * f) {
      xi = eps * dir;
    } else if (u < 3.0 * f) {
      xi = -2.0 * eta + eps * dir;
    }
    if (norm(eta) < 1e-12 || norm(xi) < 1e-12) continue;
    const bool compact = norm(xi) <= spec.compact_radius && norm(eta) <= spec.compact_radius;
    for (std::size_t b = 0; b < bounds.size(); ++b) {
      const double lhs = bounds[b].lhs(xi, eta);
      const double ratio = lhs / bounds[b].rhs(xi, eta);
      BoundResult& r = res[b];
      ++r.samples;
      if (ratio < r.min_ratio) {
        r.min_ratio = ratio;
        r.ratio_argmin_xi = xi;
        r.ratio_argmin_eta = eta;
      }
      if (compact && lhs < r.raw_min) {
        r.raw_min = lhs;
        r.raw_argmin_xi = xi;
        r.raw_argmin_eta = eta;
      }
    }
  }

  for (auto& r : res) {
    r.positive = std::isfinite(r.min_ratio) && r.min_ratio > 0.0;
    if (r.classified == ResonantSet::empty) {
      r.argmin_distance = std::numeric_limits<double>::infinity();
      r.consistent = r.raw_min >= empty_set_floor;
    } else {
      r.argmin_distance = relative_distance(r.classified, r.raw_argmin_xi, r.raw_argmin_eta);
      r.consistent = r.argmin_distance <= on_set_tolerance;
    }
  }
  return res;
}

std::vector<BoundResult> scan_all_bounds(const SampleSpec& spec) {
  std::vector<BoundResult> out;
  std::uint64_t offset = 0;
  for (PhaseKind k : {PhaseKind::dirac, PhaseKind::maxwell}) {
    for (const auto& s : all_sign_triples()) {
      SampleSpec sub = spec;
      sub.seed = spec.seed + 7919 * offset++;
      auto r = scan_lower_bounds(k, s, sub);
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  return out;
}

ApproximationScan phase_approximation_scan(std::uint64_t samples, double xi_max, double eta_max,
                                           std::uint64_t seed, double mass) {
  if (xi_max <= 0.0 || eta_max <= 0.0) throw DomainError("phase_approximation_scan: invalid ranges");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ApproximationScan out;
  for (std::uint64_t i = 0; i < samples; ++i) {
    // Uniform in the ball for xi; eta radius mixes uniform and log-uniform so
    // both the small-|eta| limit and |eta| ~ eta_max are covered.
    const Vec3 xi = (xi_max * std::cbrt(unit(rng))) * random_direction(rng);
    const double r = (i % 2 == 0) ? eta_max * unit(rng) : log_uniform(rng, 1e-4 * eta_max, eta_max);
    if (r <= 0.0) continue;
    const Vec3 eta = r * random_direction(rng);
    const double bx = bracket(xi, mass);
    // <xi> - <xi - eta> - xi.eta/<xi>, differenced without cancellation.
    const double residual = std::abs(bracket_difference(xi, xi - eta, mass) - dot(xi, eta) / bx);
    const double ratio = residual / (r * r);
    ++out.samples;
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax_xi = xi;
      out.argmax_eta = eta;
    }
  }
  return out;
}

}  // namespace mdlab
