#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ballmax/geometry.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

struct SspInstance {
  std::vector<double> s;  // positive weights
  double t = 0.0;
  double beta = 0.0;  // > 0; defaults to 1/(2 * sum(s)) when <= 0

  int n() const { return static_cast<int>(s.size()); }
};

struct FacetMissesSphere : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DroppedFacet {
  std::string name;
  double delta = 0.0;  // signed distance of the facet plane from the sphere center
};

struct SspEncoding {
  Point c0;             // (1 - beta * S) / 2
  Point sphere_center;  // (1/2) * 1
  double sphere_radius = 0.0;
  BallSet balls;
  double offset_param = 0.0;
  double beta = 0.0;
  std::vector<DroppedFacet> dropped;

  // Objective value at a feasible SSP solution corner: ||C0||^2 + beta*T.
  double solvable_distance_sq(double t) const {
    return c0.squaredNorm() + beta * t;
  }
};

enum class SspDecision { Solvable, Unsolvable, Inconclusive };

inline const char* to_string(SspDecision d) {
  switch (d) {
    case SspDecision::Solvable: return "Solvable";
    case SspDecision::Unsolvable: return "Unsolvable";
    case SspDecision::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline double default_beta(const SspInstance& ssp) {
  double sum = 0.0;
  for (double v : ssp.s) sum += v;
  return 1.0 / (2.0 * sum);
}

namespace ssp_detail {

struct Facet {
  Point a;   // unit outward normal of a . x <= b
  double b;  // offset
  std::string name;
};

}  // namespace ssp_detail

// Replace each facet of the SSP polytope (unit hypercube cut by S.x <= T)
// with a ball whose boundary leaves the same imprint on the circumscribed
// sphere B(1/2, sqrt(n)/2).  Facets whose plane misses the sphere on the
// redundant side are dropped; an infeasible facet throws.
inline SspEncoding encode(const SspInstance& ssp, double offset_param = 0.0) {
  const int n = ssp.n();
  if (n < 1) throw InvalidInstance("ssp encode: need n >= 1");
  for (double v : ssp.s)
    if (!(v > 0.0)) throw InvalidInstance("ssp encode: S entries must be positive");

  SspEncoding enc;
  enc.beta = ssp.beta > 0.0 ? ssp.beta : default_beta(ssp);
  enc.sphere_center = Point::Constant(n, 0.5);
  enc.sphere_radius = 0.5 * std::sqrt(static_cast<double>(n));
  enc.offset_param = offset_param > 0.0 ? offset_param : enc.sphere_radius;
  Eigen::Map<const Eigen::VectorXd> s(ssp.s.data(), n);
  enc.c0 = (Point::Ones(n) - enc.beta * s) / 2.0;

  std::vector<ssp_detail::Facet> facets;
  for (int i = 0; i < n; ++i) {
    Point e = Point::Zero(n);
    e[i] = 1.0;
    facets.push_back({-e, 0.0, "x" + std::to_string(i) + " >= 0"});
    facets.push_back({e, 1.0, "x" + std::to_string(i) + " <= 1"});
  }
  facets.push_back({s / s.norm(), ssp.t / s.norm(), "S.x <= T"});

  const double rho = enc.sphere_radius;
  const double eps = 1e-12 * (1.0 + rho);
  enc.balls.dim = n;
  for (const auto& f : facets) {
    const double delta = f.b - f.a.dot(enc.sphere_center);
    if (delta > rho + eps) {
      enc.dropped.push_back({f.name, delta});  // sphere entirely feasible
      continue;
    }
    if (delta < -rho - eps)
      throw FacetMissesSphere("facet '" + f.name + "' leaves no feasible sphere point");
    const double imprint_sq = std::max(0.0, rho * rho - delta * delta);
    const Point center = enc.sphere_center + (delta - enc.offset_param) * f.a;
    const double radius = std::sqrt(enc.offset_param * enc.offset_param + imprint_sq);
    enc.balls.balls.push_back(Ball{center, radius});
  }
  if (enc.balls.balls.empty())
    throw FacetMissesSphere("all facets dropped; encoding is degenerate");
  return enc;
}

// Decision rule: R0^2 reaches ||C0||^2 + beta*T iff SSP(S, T) is solvable.
// The Unsolvable band uses the integrality gap beta/2 supplied by integer S.
inline SspDecision decide_by_distance(const SspInstance& ssp, double r0_estimate,
                                      double tol = 1e-9) {
  const double beta = ssp.beta > 0.0 ? ssp.beta : default_beta(ssp);
  SspInstance with_beta = ssp;
  with_beta.beta = beta;
  const SspEncoding enc = encode(with_beta);
  const double target = enc.solvable_distance_sq(ssp.t);
  const double gap = beta / 2.0;
  const double r0_sq = r0_estimate * r0_estimate;
  if (r0_sq >= target - tol) return SspDecision::Solvable;
  if (r0_sq <= target - gap + tol) return SspDecision::Unsolvable;
  return SspDecision::Inconclusive;
}

struct SspBruteForce {
  bool solvable = false;
  std::vector<int> witness;
};

inline SspBruteForce brute_force_ssp(const SspInstance& ssp) {
  const int n = ssp.n();
  if (n > 24) throw TooLarge("brute_force_ssp: n > 24");
  SspBruteForce res;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sum += ssp.s[static_cast<std::size_t>(i)];
    if (std::abs(sum - ssp.t) < 1e-9) {
      res.solvable = true;
      res.witness.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        res.witness[static_cast<std::size_t>(i)] = (mask >> i) & 1;
      return res;
    }
  }
  return res;
}

// Ground-truth R0 over the encoding's feasible hypercube corners (2^n scan).
inline double corner_enumeration_r0(const SspInstance& ssp, const SspEncoding& enc) {
  const int n = ssp.n();
  if (n > 24) throw TooLarge("corner_enumeration_r0: n > 24");
  double best_sq = -1.0;
  Point x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const bool on = (mask >> i) & 1;
      x[i] = on ? 1.0 : 0.0;
      if (on) sum += ssp.s[static_cast<std::size_t>(i)];
    }
    if (sum > ssp.t) continue;
    best_sq = std::max(best_sq, (x - enc.c0).squaredNorm());
  }
  return best_sq < 0.0 ? 0.0 : std::sqrt(best_sq);
}

}  // namespace ballmax
