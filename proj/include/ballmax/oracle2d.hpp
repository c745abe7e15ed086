#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ballmax/geometry.hpp"
#include "ballmax/sequence.hpp"
#include "ballmax/solver.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

struct EmptyIntersection : std::runtime_error {
  EmptyIntersection() : std::runtime_error("intersection of balls is empty") {}
};

struct OracleResult {
  double r0 = 0.0;
  std::vector<Point> maximizers;
  std::vector<std::vector<int>> certificates;  // active ball indices per maximizer
};

namespace oracle_detail {

inline Point pt2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

// Intersection points of two circles; tangency (within a small discriminant
// floor) yields one candidate, not two.
inline std::vector<Point> circle_pair(const Ball& a, const Ball& b) {
  const Point d = b.center - a.center;
  const double d2 = d.squaredNorm();
  if (d2 < 1e-30) return {};
  const double ra2 = a.radius * a.radius;
  const double rb2 = b.radius * b.radius;
  const double t = (d2 + ra2 - rb2) / (2.0 * d2);
  const double disc = ra2 / d2 - t * t;
  const Point mid = a.center + t * d;
  if (disc < -1e-10) return {};
  if (disc <= 1e-10) return {mid};
  const double s = std::sqrt(disc);
  const Point perp = pt2(-d[1], d[0]);
  return {mid + s * perp, mid - s * perp};
}

}  // namespace oracle_detail

// Exact farthest point from C0 over an intersection of disks.  The boundary
// is a union of arcs, so distance extrema sit at arc endpoints (pairwise
// circle intersections) or per-disk antipodal points.
inline OracleResult farthest_2d(const Instance& inst) {
  validate(inst);
  if (inst.dim() != 2) throw InvalidInstance("farthest_2d: dim must be 2");
  const double feas_tol = 1e-9;

  std::vector<Point> candidates;
  const auto& balls = inst.q.balls;
  for (std::size_t a = 0; a < balls.size(); ++a) {
    for (std::size_t b = a + 1; b < balls.size(); ++b) {
      for (const Point& p : oracle_detail::circle_pair(balls[a], balls[b]))
        candidates.push_back(p);
    }
    const Point dir = balls[a].center - inst.c0;
    const double dn = dir.norm();
    if (dn > 1e-12) {
      candidates.push_back(balls[a].center + (balls[a].radius / dn) * dir);
    } else {
      // Degenerate C_k = C0: boundary points along the axes as ray probes.
      candidates.push_back(balls[a].center + balls[a].radius * oracle_detail::pt2(1, 0));
      candidates.push_back(balls[a].center + balls[a].radius * oracle_detail::pt2(-1, 0));
      candidates.push_back(balls[a].center + balls[a].radius * oracle_detail::pt2(0, 1));
      candidates.push_back(balls[a].center + balls[a].radius * oracle_detail::pt2(0, -1));
    }
  }

  OracleResult res;
  double best = -1.0;
  for (const Point& p : candidates) {
    if (h_value(inst.q, p) > feas_tol) continue;
    const double d = (p - inst.c0).norm();
    if (d > best + 1e-9) {
      best = d;
      res.maximizers.clear();
    }
    if (d >= best - 1e-9) {
      bool dup = false;
      for (const Point& q : res.maximizers)
        if ((q - p).norm() < 1e-9) dup = true;
      if (!dup) res.maximizers.push_back(p);
    }
  }
  // Every nonempty disk intersection has a feasible boundary candidate among
  // the enumerated set, so no candidate means the intersection is empty.
  if (best < 0.0) throw EmptyIntersection();
  res.r0 = best;
  for (const Point& p : res.maximizers) {
    std::vector<int> cert;
    for (std::size_t k = 0; k < balls.size(); ++k)
      if (std::abs((p - balls[k].center).norm() - balls[k].radius) <= 1e-9)
        cert.push_back(static_cast<int>(k));
    res.certificates.push_back(std::move(cert));
  }
  return res;
}

namespace oracle_detail {

struct Arc {
  double lo, hi;  // subset of [0, 2pi), lo <= hi
};

inline std::vector<Arc> intersect_arcs(const std::vector<Arc>& a, const std::vector<Arc>& b) {
  std::vector<Arc> out;
  for (const Arc& x : a)
    for (const Arc& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (hi > lo) out.push_back({lo, hi});
    }
  return out;
}

}  // namespace oracle_detail

// Exact angular measure (as a fraction of 2*pi) of the circle of radius r
// about C0 inside the element Q_{r^2}^i.  Dimension 2 only.
inline double arc_fraction_2d(const Instance& inst, int i, double r) {
  if (inst.dim() != 2) throw InvalidInstance("arc_fraction_2d: dim must be 2");
  if (r <= 0.0) throw InvalidInstance("arc_fraction_2d: r must be positive");
  const SequenceElement el = element_at(inst, i, r * r);
  if (el.empty()) return 0.0;

  const double two_pi = 2.0 * M_PI;
  std::vector<oracle_detail::Arc> feasible = {{0.0, two_pi}};
  for (std::size_t k = 0; k < el.centers.size(); ++k) {
    const Point d = el.centers[k] - inst.c0;
    const double dist = d.norm();
    if (dist < 1e-14) {
      if (r * r <= el.radii_sq[k]) continue;  // whole circle inside
      return 0.0;
    }
    // ||x - D||^2 <= rho^2 on the circle  <=>  cos(theta - phi) >= t.
    const double t = (r * r + dist * dist - el.radii_sq[k]) / (2.0 * r * dist);
    if (t <= -1.0) continue;
    if (t >= 1.0) return 0.0;
    const double phi = std::atan2(d[1], d[0]);
    const double half = std::acos(t);
    double lo = phi - half, hi = phi + half;
    // Normalize into [0, 2pi), splitting a wrap-around arc in two.
    std::vector<oracle_detail::Arc> keep;
    lo = std::fmod(lo + 4.0 * two_pi, two_pi);
    hi = lo + 2.0 * half;
    if (hi <= two_pi) {
      keep.push_back({lo, hi});
    } else {
      keep.push_back({lo, two_pi});
      keep.push_back({0.0, hi - two_pi});
    }
    feasible = oracle_detail::intersect_arcs(feasible, keep);
    if (feasible.empty()) return 0.0;
  }
  double total = 0.0;
  for (const auto& arc : feasible) total += arc.hi - arc.lo;
  return total / two_pi;
}

// Grid-counted area of the element at probe r_sq; error bounded by
// perimeter * grid_step.
inline double area_2d(const Instance& inst, int i, double r_sq_probe, double grid_step) {
  if (inst.dim() != 2) throw InvalidInstance("area_2d: dim must be 2");
  if (grid_step <= 0.0) throw InvalidInstance("area_2d: grid_step must be positive");
  const SequenceElement el = element_at(inst, i, r_sq_probe);
  if (el.empty()) return 0.0;

  // Bounding box: intersection of the per-ball boxes.
  double x_lo = -std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = x_hi;
  for (std::size_t k = 0; k < el.centers.size(); ++k) {
    const double rho = std::sqrt(el.radii_sq[k]);
    x_lo = std::max(x_lo, el.centers[k][0] - rho);
    x_hi = std::min(x_hi, el.centers[k][0] + rho);
    y_lo = std::max(y_lo, el.centers[k][1] - rho);
    y_hi = std::min(y_hi, el.centers[k][1] + rho);
  }
  if (x_hi <= x_lo || y_hi <= y_lo) return 0.0;

  std::int64_t count = 0;
  Point p(2);
  for (double x = x_lo + 0.5 * grid_step; x < x_hi; x += grid_step) {
    for (double y = y_lo + 0.5 * grid_step; y < y_hi; y += grid_step) {
      p[0] = x;
      p[1] = y;
      if (el.contains(p)) ++count;
    }
  }
  return static_cast<double>(count) * grid_step * grid_step;
}

}  // namespace ballmax
