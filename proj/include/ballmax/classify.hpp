#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ballmax/solver.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

enum class TheoremCase { Interior, Exterior, Boundary };

inline const char* to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::Interior: return "InteriorCase";
    case TheoremCase::Exterior: return "ExteriorCase";
    case TheoremCase::Boundary: return "BoundaryCase";
  }
  return "?";
}

struct Classification {
  TheoremCase which = TheoremCase::Interior;
  double r_lower = 0.0;
  std::optional<double> r_upper;  // set in the boundary case only
  Point y_star;
  double h_at_y = 0.0;
};

// Decide which alternative of the three-case theorem holds for a converged
// DC solution.  The boundary band is mandatory in floating point; a
// conservative band only widens the reported interval.
inline Classification classify(const Instance& inst, const DcSolution& sol,
                               double boundary_tol = 1e-6) {
  Classification c;
  c.y_star = sol.y_star;
  c.h_at_y = sol.h_at_y;
  if (sol.h_at_y < -boundary_tol) {
    c.which = TheoremCase::Interior;
    c.r_lower = sol.r_lower;
  } else if (sol.h_at_y > boundary_tol) {
    c.which = TheoremCase::Exterior;
    c.r_lower = sol.r_lower;
  } else {
    // Case 3: underline{R}^2 <= R0^2 <= underline{R}^2 / lambda with
    // underline{R}^2 = |h(y*) - g(y*)|.
    c.which = TheoremCase::Boundary;
    c.r_lower = sol.r_lower;
    c.r_upper = sol.r_lower / std::sqrt(inst.lambda);
  }
  return c;
}

// Certified interval: closed in the boundary case, lower bound only otherwise
// ("None" upper means refine via the estimator).
inline std::pair<double, std::optional<double>> certify_interval(
    const Classification& c, const Instance& inst) {
  (void)inst;
  if (c.which == TheoremCase::Boundary) return {c.r_lower, c.r_upper};
  return {c.r_lower, std::nullopt};
}

}  // namespace ballmax
