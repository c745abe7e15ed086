#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ballmax/types.hpp"

namespace ballmax {

struct HullResult {
  bool inside = false;
  double distance = 0.0;  // distance from c0 to conv{centers}
  // Separating hyperplane, valid when !inside:
  //   normal . c0 + offset < 0  and  normal . C_k + offset > 0 for all k.
  Point normal;
  double offset = 0.0;
};

namespace detail {

// Min-norm point in the affine hull of the columns of V, as convex-combination
// weights (may be negative).  Solves the equality-constrained least squares
// KKT system.
inline Eigen::VectorXd affine_min_norm_weights(const Eigen::MatrixXd& V) {
  const int s = static_cast<int>(V.cols());
  Eigen::MatrixXd kkt(s + 1, s + 1);
  kkt.topLeftCorner(s, s) = V.transpose() * V;
  kkt.topRightCorner(s, 1).setOnes();
  kkt.bottomLeftCorner(1, s).setOnes();
  kkt(s, s) = 0.0;
  // Tiny Tikhonov term keeps near-duplicate points solvable.
  const double reg = 1e-14 * (1.0 + kkt.topLeftCorner(s, s).trace());
  kkt.topLeftCorner(s, s).diagonal().array() += reg;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
  rhs(s) = 1.0;
  return kkt.fullPivLu().solve(rhs).head(s);
}

}  // namespace detail

// Wolfe's min-norm-point algorithm on the shifted points {C_k - c0}.  Exact
// convex-feasibility decision to within tol, with a certified separating
// hyperplane in the Outside case.
inline HullResult hull_contains(const std::vector<Point>& centers,
                                const Point& c0, double tol = 1e-9) {
  if (centers.empty()) throw InvalidInstance("hull_contains: no centers");
  const int n = static_cast<int>(c0.size());
  const int m = static_cast<int>(centers.size());
  Eigen::MatrixXd v(n, m);
  double scale = 1.0;
  for (int k = 0; k < m; ++k) {
    if (centers[static_cast<std::size_t>(k)].size() != n)
      throw DimensionMismatch("hull_contains: center dimension mismatch");
    v.col(k) = centers[static_cast<std::size_t>(k)] - c0;
    scale = std::max(scale, v.col(k).norm());
  }

  // corral: column indices of the current affinely independent set
  std::vector<int> corral;
  Eigen::VectorXd w;  // convex weights over the corral
  {
    int best = 0;
    for (int k = 1; k < m; ++k)
      if (v.col(k).squaredNorm() < v.col(best).squaredNorm()) best = k;
    corral = {best};
    w = Eigen::VectorXd::Ones(1);
  }

  const double eps = 1e-12 * scale * scale;
  Point x = v.col(corral[0]);

  for (int iter = 0; iter < 16 * (m + 2); ++iter) {
    // Most violating point: min over k of x . v_k.
    int j = 0;
    double best_dot = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      const double d = x.dot(v.col(k));
      if (d < best_dot) {
        best_dot = d;
        j = k;
      }
    }
    if (best_dot >= x.squaredNorm() - eps) break;  // optimal
    if (std::find(corral.begin(), corral.end(), j) == corral.end()) {
      corral.push_back(j);
      w.conservativeResize(w.size() + 1);
      w(w.size() - 1) = 0.0;
    }

    // Inner loop: pull the weights to the affine minimizer, clipping at the
    // boundary of the simplex and dropping vanished points.
    for (int inner = 0; inner < m + 2; ++inner) {
      Eigen::MatrixXd vs(n, static_cast<int>(corral.size()));
      for (std::size_t t = 0; t < corral.size(); ++t)
        vs.col(static_cast<int>(t)) = v.col(corral[t]);
      Eigen::VectorXd a = detail::affine_min_norm_weights(vs);
      if ((a.array() > 1e-14).all()) {
        w = a;
        break;
      }
      // Step from w toward a until the first weight hits zero.
      double theta = 1.0;
      for (int t = 0; t < a.size(); ++t) {
        if (a(t) < 1e-14) {
          const double denom = w(t) - a(t);
          if (denom > 0.0) theta = std::min(theta, w(t) / denom);
        }
      }
      w = (1.0 - theta) * w + theta * a;
      // Drop zeroed entries.
      std::vector<int> keep_idx;
      for (int t = 0; t < w.size(); ++t)
        if (w(t) > 1e-14) keep_idx.push_back(t);
      if (keep_idx.size() == corral.size()) break;  // numerical stall
      std::vector<int> new_corral;
      Eigen::VectorXd new_w(static_cast<int>(keep_idx.size()));
      for (std::size_t t = 0; t < keep_idx.size(); ++t) {
        new_corral.push_back(corral[static_cast<std::size_t>(keep_idx[t])]);
        new_w(static_cast<int>(t)) = w(keep_idx[t]);
      }
      corral = std::move(new_corral);
      w = new_w / new_w.sum();
    }

    Point x_new = Eigen::VectorXd::Zero(n);
    for (std::size_t t = 0; t < corral.size(); ++t)
      x_new += w(static_cast<int>(t)) * v.col(corral[t]);
    if ((x_new - x).norm() <= 1e-15 * scale) {
      x = x_new;
      break;
    }
    x = x_new;
  }

  HullResult res;
  res.distance = x.norm();
  if (res.distance <= tol) {
    res.inside = true;
    return res;
  }
  res.inside = false;
  res.normal = x / res.distance;
  // normal . (C_k - c0) >= distance for all k by optimality of x.
  res.offset = -res.normal.dot(c0) - 0.5 * res.distance;
  return res;
}

inline HullResult hull_contains(const BallSet& q, const Point& c0,
                                double tol = 1e-9) {
  std::vector<Point> centers;
  centers.reserve(q.size());
  for (const Ball& b : q.balls) centers.push_back(b.center);
  return hull_contains(centers, c0, tol);
}

}  // namespace ballmax
