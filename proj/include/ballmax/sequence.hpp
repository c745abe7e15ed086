#pragma once

#include <cmath>
#include <vector>

#include "ballmax/geometry.hpp"
#include "ballmax/hull.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

struct OverflowGuard : std::runtime_error {
  explicit OverflowGuard(int i)
      : std::runtime_error("sequence index " + std::to_string(i) +
                           " exceeds the (1-lambda)^{-i} <= 1e12 guard") {}
};

// One element of the two-sided sequence Q_{R^2}^i.  Sign convention: i >= 1 is
// the forward (Procedure A) direction, i <= -1 the backward "seed" direction.
// Centers depend only on (lambda, C0, base centers, i), never on the probe R.
struct SequenceElement {
  int index = 0;
  std::vector<Point> centers;
  std::vector<double> radii_sq;  // may be <= 0; then that ball is empty
  bool hull_inside = false;      // hull_contains(centers, c0)

  bool empty() const {
    for (double r2 : radii_sq)
      if (r2 <= 0.0) return true;
    return false;
  }

  bool contains(const Point& x) const {
    if (empty()) return false;
    for (std::size_t k = 0; k < centers.size(); ++k)
      if ((x - centers[k]).squaredNorm() > radii_sq[k]) return false;
    return true;
  }
};

namespace seq_detail {

inline void guard(double lambda, int i) {
  if (std::pow(1.0 - lambda, -static_cast<double>(i)) > 1e12) throw OverflowGuard(i);
}

}  // namespace seq_detail

// Closed form C_{k,i} = (1-lambda)^{-i} (C_k - (1 - (1-lambda)^i) C0), i >= 1.
inline std::vector<Point> forward_centers(const Instance& inst, int i) {
  if (i < 1) throw InvalidInstance("forward_centers: i must be >= 1");
  seq_detail::guard(inst.lambda, i);
  const double q = std::pow(1.0 - inst.lambda, static_cast<double>(i));
  std::vector<Point> out;
  out.reserve(inst.q.size());
  for (const Ball& b : inst.q.balls)
    out.push_back((b.center - (1.0 - q) * inst.c0) / q);
  return out;
}

// Closed form C_{k,-i} = (1-lambda)^i C_k + (1 - (1-lambda)^i) C0, i >= 1.
inline std::vector<Point> backward_centers(const Instance& inst, int i) {
  if (i < 1) throw InvalidInstance("backward_centers: i must be >= 1");
  const double q = std::pow(1.0 - inst.lambda, static_cast<double>(i));
  std::vector<Point> out;
  out.reserve(inst.q.size());
  for (const Ball& b : inst.q.balls)
    out.push_back(q * b.center + (1.0 - q) * inst.c0);
  return out;
}

// r_{k,-i}^2 = r0_sq + (1-lambda)^i (r_k^2 - r0_sq - (1 - (1-lambda)^i) d_k^2).
inline std::vector<double> backward_radii_sq(const Instance& inst, int i, double r0_sq) {
  if (i < 1) throw InvalidInstance("backward_radii_sq: i must be >= 1");
  if (r0_sq < 0.0) throw InvalidInstance("backward_radii_sq: r0_sq must be >= 0");
  const double q = std::pow(1.0 - inst.lambda, static_cast<double>(i));
  std::vector<double> out;
  out.reserve(inst.q.size());
  for (const Ball& b : inst.q.balls) {
    const double d2 = (inst.c0 - b.center).squaredNorm();
    out.push_back(r0_sq + q * (b.radius * b.radius - r0_sq - (1.0 - q) * d2));
  }
  return out;
}

// One forward step of the radius recurrence, given the previous generation.
inline std::vector<double> forward_radii_sq(const Instance& inst,
                                            const std::vector<double>& prev_radii_sq,
                                            const std::vector<Point>& prev_centers,
                                            double r0_sq) {
  if (prev_radii_sq.size() != prev_centers.size())
    throw InvalidInstance("forward_radii_sq: inconsistent lengths");
  const double lam = inst.lambda;
  std::vector<double> out;
  out.reserve(prev_radii_sq.size());
  for (std::size_t k = 0; k < prev_radii_sq.size(); ++k) {
    const double d2 = (inst.c0 - prev_centers[k]).squaredNorm();
    out.push_back((1.0 / (1.0 - lam)) *
                  (-lam * r0_sq + lam / (1.0 - lam) * d2 + prev_radii_sq[k]));
  }
  return out;
}

inline SequenceElement element_at(const Instance& inst, int i, double r0_sq) {
  validate(inst);
  SequenceElement el;
  el.index = i;
  if (i == 0) {
    for (const Ball& b : inst.q.balls) {
      el.centers.push_back(b.center);
      el.radii_sq.push_back(b.radius * b.radius);
    }
  } else if (i > 0) {
    seq_detail::guard(inst.lambda, i);
    std::vector<Point> centers;
    std::vector<double> radii_sq;
    for (const Ball& b : inst.q.balls) {
      centers.push_back(b.center);
      radii_sq.push_back(b.radius * b.radius);
    }
    for (int t = 0; t < i; ++t) {
      radii_sq = forward_radii_sq(inst, radii_sq, centers, r0_sq);
      for (Point& c : centers) c = (c - inst.lambda * inst.c0) / (1.0 - inst.lambda);
    }
    el.centers = std::move(centers);
    el.radii_sq = std::move(radii_sq);
  } else {
    el.centers = backward_centers(inst, -i);
    el.radii_sq = backward_radii_sq(inst, -i, r0_sq);
  }
  el.hull_inside = hull_contains(el.centers, inst.c0).inside;
  return el;
}

struct ProcedureAResult {
  bool terminated = false;  // C0 left the hull of the generated centers
  int iterations = 0;
  std::vector<SequenceElement> trace;
};

// Algorithm 1: iterate the forward center map while C0 stays inside the hull.
// Radii in the trace use the probe r0_sq (they do not affect the loop guard).
inline ProcedureAResult procedure_a(const Instance& inst, int max_iter,
                                    double r0_sq = 0.0) {
  if (max_iter < 1) throw InvalidInstance("procedure_a: max_iter must be >= 1");
  ProcedureAResult res;
  for (int i = 0; i <= max_iter; ++i) {
    if (std::pow(1.0 - inst.lambda, -static_cast<double>(i)) > 1e12) break;
    SequenceElement el = element_at(inst, i, r0_sq);
    const bool inside = el.hull_inside;
    res.trace.push_back(std::move(el));
    res.iterations = i;
    if (!inside) {
      res.terminated = true;
      return res;
    }
    if (i == max_iter) break;
  }
  res.terminated = false;
  return res;
}

}  // namespace ballmax
