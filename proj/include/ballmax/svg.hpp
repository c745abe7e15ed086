#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ballmax/types.hpp"

namespace ballmax {

struct DimensionUnsupported : std::runtime_error {
  explicit DimensionUnsupported(int dim)
      : std::runtime_error("figures require dim = 2, got " + std::to_string(dim)) {}
};

// Minimal deterministic SVG writer for 2D figures: fixed decimal formatting,
// no timestamps, diffable output.
class SvgCanvas {
 public:
  void add_circle(double cx, double cy, double r, const std::string& stroke,
                  double stroke_width = 0.01, const std::string& fill = "none",
                  double fill_opacity = 1.0) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "  <circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" stroke=\"%s\" "
                  "stroke-width=\"%.4f\" fill=\"%s\" fill-opacity=\"%.3f\"/>\n",
                  cx, cy, r, stroke.c_str(), stroke_width, fill.c_str(), fill_opacity);
    body_ += buf;
    extend(cx - r, cy - r);
    extend(cx + r, cy + r);
  }

  void add_cross(double cx, double cy, double size, const std::string& stroke) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "  <path d=\"M %.6f %.6f L %.6f %.6f M %.6f %.6f L %.6f %.6f\" "
                  "stroke=\"%s\" stroke-width=\"%.4f\"/>\n",
                  cx - size, cy - size, cx + size, cy + size, cx - size, cy + size,
                  cx + size, cy - size, stroke.c_str(), size * 0.3);
    body_ += buf;
    extend(cx - size, cy - size);
    extend(cx + size, cy + size);
  }

  void add_dot(double cx, double cy, double r, const std::string& fill) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  <circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"%s\"/>\n", cx, cy,
                  r, fill.c_str());
    body_ += buf;
  }

  void add_comment(const std::string& text) { body_ += "  <!-- " + text + " -->\n"; }

  std::string str() const {
    const double pad = 0.05 * std::max(max_x_ - min_x_, max_y_ - min_y_) + 0.1;
    char head[256];
    std::snprintf(head, sizeof(head),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6f %.6f %.6f "
                  "%.6f\">\n",
                  min_x_ - pad, min_y_ - pad, (max_x_ - min_x_) + 2 * pad,
                  (max_y_ - min_y_) + 2 * pad);
    return std::string(head) + body_ + "</svg>\n";
  }

 private:
  void extend(double x, double y) {
    min_x_ = std::min(min_x_, x);
    max_x_ = std::max(max_x_, x);
    min_y_ = std::min(min_y_, y);
    max_y_ = std::max(max_y_, y);
  }

  std::string body_;
  double min_x_ = 0.0, max_x_ = 0.0, min_y_ = 0.0, max_y_ = 0.0;
};

}  // namespace ballmax
