#pragma once

#include <string>
#include <vector>

#include "ballmax/geometry.hpp"
#include "ballmax/io.hpp"
#include "ballmax/oracle2d.hpp"
#include "ballmax/sequence.hpp"
#include "ballmax/svg.hpp"

namespace ballmax {

// Layered 2D figure set: the base intersection (green), the Q_{R^2} family
// for a grid of R with the R = r0 member highlighted (blue/magenta), and the
// backward / forward sequence elements at the given indices.
inline std::vector<std::string> emit_figures(const Instance& inst, double r0,
                                             const std::vector<int>& indices,
                                             const std::string& out_dir) {
  if (inst.dim() != 2) throw DimensionUnsupported(inst.dim());
  std::vector<std::string> files;
  const double r0_sq = r0 * r0;

  auto draw_q = [&](SvgCanvas& svg) {
    for (const Ball& b : inst.q.balls)
      svg.add_circle(b.center[0], b.center[1], b.radius, "green", 0.015, "green", 0.08);
    svg.add_cross(inst.c0[0], inst.c0[1], 0.08, "black");
  };

  {
    SvgCanvas svg;
    svg.add_comment("base intersection of balls");
    draw_q(svg);
    const std::string path = out_dir + "/figure_q.svg";
    write_text(path, svg.str());
    files.push_back(path);
  }

  {
    SvgCanvas svg;
    svg.add_comment("max indicator family Q_{R^2} with the R = r0 member highlighted");
    draw_q(svg);
    for (int t = 1; t <= 5; ++t) {
      const double r = r0 * 0.3 * t;  // grid up to 1.5 * r0
      const QSetResult qs = qset_at(inst, r * r);
      if (qs.empty()) continue;
      for (const Ball& b : qs.set.balls)
        svg.add_circle(b.center[0], b.center[1], b.radius, "blue", 0.01);
    }
    const QSetResult at_r0 = qset_at(inst, r0_sq);
    if (!at_r0.empty())
      for (const Ball& b : at_r0.set.balls)
        svg.add_circle(b.center[0], b.center[1], b.radius, "magenta", 0.02, "cyan", 0.10);
    try {
      const OracleResult oracle = farthest_2d(inst);
      for (const Point& p : oracle.maximizers) svg.add_dot(p[0], p[1], 0.04, "red");
    } catch (const EmptyIntersection&) {
    }
    const std::string path = out_dir + "/figure_family.svg";
    write_text(path, svg.str());
    files.push_back(path);
  }

  {
    SvgCanvas svg;
    svg.add_comment("backward (seed) sequence; the limit is the ball B(C0, r0)");
    draw_q(svg);
    for (int i : indices) {
      if (i >= 0) continue;
      const SequenceElement el = element_at(inst, i, r0_sq);
      for (std::size_t k = 0; k < el.centers.size(); ++k) {
        if (el.radii_sq[k] <= 0.0) continue;
        svg.add_circle(el.centers[k][0], el.centers[k][1], std::sqrt(el.radii_sq[k]),
                       "blue", 0.01);
      }
    }
    svg.add_circle(inst.c0[0], inst.c0[1], r0, "magenta", 0.02);
    const std::string path = out_dir + "/figure_backward.svg";
    write_text(path, svg.str());
    files.push_back(path);
  }

  {
    SvgCanvas svg;
    svg.add_comment("forward (Procedure A) sequence");
    draw_q(svg);
    for (int i : indices) {
      if (i <= 0) continue;
      const SequenceElement el = element_at(inst, i, r0_sq);
      for (std::size_t k = 0; k < el.centers.size(); ++k) {
        if (el.radii_sq[k] <= 0.0) continue;
        svg.add_circle(el.centers[k][0], el.centers[k][1], std::sqrt(el.radii_sq[k]),
                       "red", 0.01);
      }
    }
    const std::string path = out_dir + "/figure_forward.svg";
    write_text(path, svg.str());
    files.push_back(path);
  }
  return files;
}

}  // namespace ballmax
