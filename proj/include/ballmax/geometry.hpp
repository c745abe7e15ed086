#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ballmax/types.hpp"

namespace ballmax {

// h(x) = max_k ||x - C_k||^2 - r_k^2.  Q = {h <= 0}.
inline double h_value(const BallSet& q, const Point& x) {
  check_dim(q, x);
  double best = -std::numeric_limits<double>::infinity();
  for (const Ball& b : q.balls) {
    const double v = (x - b.center).squaredNorm() - b.radius * b.radius;
    best = std::max(best, v);
  }
  return best;
}

inline bool in_ballset(const BallSet& q, const Point& x, double tol = 0.0) {
  check_dim(q, x);
  for (const Ball& b : q.balls) {
    if ((x - b.center).squaredNorm() > b.radius * b.radius + tol) return false;
  }
  return true;
}

// g_lambda(x) = lambda * ||x - C0||^2.
inline double g_value(const Instance& inst, const Point& x) {
  if (x.size() != inst.dim()) throw DimensionMismatch("g_value: point dimension mismatch");
  return inst.lambda * (x - inst.c0).squaredNorm();
}

// One quadratic piece of the convex rewrite of h - g_lambda:
//   scale * ||x - center||^2 + offset
// with scale = 1 - lambda.
struct DcPiece {
  int index = 0;
  Point center;
  double offset = 0.0;
  double scale = 0.0;

  double eval(const Point& x) const {
    return scale * (x - center).squaredNorm() + offset;
  }
};

inline DcPiece dc_piece(const Instance& inst, int k) {
  const Ball& b = inst.q.balls[static_cast<std::size_t>(k)];
  const double lam = inst.lambda;
  DcPiece p;
  p.index = k;
  p.scale = 1.0 - lam;
  p.center = (b.center - lam * inst.c0) / (1.0 - lam);
  p.offset = -lam / (1.0 - lam) * (inst.c0 - b.center).squaredNorm() -
             b.radius * b.radius;
  return p;
}

inline std::vector<DcPiece> dc_pieces(const Instance& inst) {
  std::vector<DcPiece> out;
  out.reserve(inst.q.size());
  for (std::size_t k = 0; k < inst.q.size(); ++k)
    out.push_back(dc_piece(inst, static_cast<int>(k)));
  return out;
}

// h(x) - g_lambda(x), computed directly.  Equals max_k dc_piece(k).eval(x).
inline double dc_objective(const Instance& inst, const Point& x) {
  return h_value(inst.q, x) - g_value(inst, x);
}

inline double dc_objective_pieces(const Instance& inst, const Point& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < inst.q.size(); ++k)
    best = std::max(best, dc_piece(inst, static_cast<int>(k)).eval(x));
  return best;
}

// Q_{R^2} as an intersection of balls.  An empty-set condition (some squared
// radius <= 0) is a first-class result, not an exception: downstream
// bisection treats it as "R too large".
struct QSetResult {
  std::optional<int> empty_index;  // first k whose squared radius <= 0
  BallSet set;                     // valid only when !empty_index

  bool empty() const { return empty_index.has_value(); }
};

inline QSetResult qset_at(const Instance& inst, double r_sq) {
  if (r_sq < 0.0) throw InvalidInstance("qset_at: r_sq must be nonnegative");
  const double lam = inst.lambda;
  QSetResult out;
  out.set.dim = inst.dim();
  for (std::size_t k = 0; k < inst.q.size(); ++k) {
    const Ball& b = inst.q.balls[k];
    const double d2 = (inst.c0 - b.center).squaredNorm();
    const double rho2 =
        (1.0 / (1.0 - lam)) *
        (-lam * r_sq + lam / (1.0 - lam) * d2 + b.radius * b.radius);
    if (rho2 <= 0.0) {
      out.empty_index = static_cast<int>(k);
      out.set.balls.clear();
      return out;
    }
    out.set.balls.push_back(
        Ball{(b.center - lam * inst.c0) / (1.0 - lam), std::sqrt(rho2)});
  }
  return out;
}

}  // namespace ballmax
