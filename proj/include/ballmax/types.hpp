#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ballmax {

using Point = Eigen::VectorXd;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidInstance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Ball {
  Point center;
  double radius = 0.0;
};

// An intersection of closed balls; ball order is stable, index k is identity.
struct BallSet {
  int dim = 0;
  std::vector<Ball> balls;

  std::size_t size() const { return balls.size(); }
};

struct Instance {
  BallSet q;
  Point c0;
  double lambda = 0.5;

  int dim() const { return q.dim; }
};

inline bool finite(const Point& p) { return p.allFinite(); }

inline void validate(const BallSet& q) {
  if (q.dim < 1) throw InvalidInstance("BallSet: dim must be positive");
  if (q.balls.empty()) throw InvalidInstance("BallSet: need at least one ball");
  for (std::size_t k = 0; k < q.balls.size(); ++k) {
    const Ball& b = q.balls[k];
    if (b.center.size() != q.dim)
      throw DimensionMismatch("BallSet: ball " + std::to_string(k) +
                              " center dimension mismatch");
    if (!finite(b.center) || !std::isfinite(b.radius))
      throw InvalidInstance("BallSet: non-finite ball " + std::to_string(k));
    if (b.radius <= 0.0)
      throw InvalidInstance("BallSet: radius of ball " + std::to_string(k) +
                            " must be strictly positive");
  }
}

inline void validate(const Instance& inst) {
  validate(inst.q);
  if (inst.c0.size() != inst.q.dim)
    throw DimensionMismatch("Instance: c0 dimension mismatch");
  if (!finite(inst.c0)) throw InvalidInstance("Instance: non-finite c0");
  if (!(inst.lambda > 0.0 && inst.lambda < 1.0))
    throw InvalidInstance("Instance: lambda must lie in (0,1)");
}

inline void check_dim(const BallSet& q, const Point& x) {
  if (x.size() != q.dim) throw DimensionMismatch("point dimension mismatch");
}

}  // namespace ballmax
