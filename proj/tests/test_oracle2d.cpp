#include <catch_amalgamated.hpp>

#include "ballmax/geometry.hpp"
#include "ballmax/oracle2d.hpp"
#include "ballmax/rng.hpp"

using namespace ballmax;

namespace {
Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}
}  // namespace

TEST_CASE("single disk: farthest point is antipodal") {
  Instance inst;
  inst.q.dim = 2;
  inst.q.balls = {{pt(0, 0), 2.0}};
  inst.c0 = pt(0.5, 0);
  inst.lambda = 0.5;
  const OracleResult res = farthest_2d(inst);
  CHECK(res.r0 == Catch::Approx(2.5).epsilon(1e-12));
  REQUIRE_FALSE(res.maximizers.empty());
  CHECK((res.maximizers[0] - pt(-2, 0)).norm() < 1e-9);
}

TEST_CASE("two-disk lens: farthest point is a circle intersection") {
  // Disks B((0,0),2) and B((1,0),2); C0 at (0.5, 0).  By symmetry the
  // farthest points are the two lens corners at x = 0.5, y = +-sqrt(4-0.25).
  Instance inst;
  inst.q.dim = 2;
  inst.q.balls = {{pt(0, 0), 2.0}, {pt(1, 0), 2.0}};
  inst.c0 = pt(0.5, 0);
  inst.lambda = 0.5;
  const OracleResult res = farthest_2d(inst);
  const double y = std::sqrt(4.0 - 0.25);
  CHECK(res.r0 == Catch::Approx(y).epsilon(1e-12));
  REQUIRE(res.maximizers.size() == 2);
  for (const Point& m : res.maximizers) {
    CHECK(m[0] == Catch::Approx(0.5).margin(1e-9));
    CHECK(std::abs(m[1]) == Catch::Approx(y).margin(1e-9));
    // Certificates name both disks as active.
  }
  for (const auto& cert : res.certificates) CHECK(cert.size() == 2);
}

TEST_CASE("degenerate case: c0 at a disk center") {
  Instance inst;
  inst.q.dim = 2;
  inst.q.balls = {{pt(0, 0), 1.0}};
  inst.c0 = pt(0, 0);
  inst.lambda = 0.5;
  const OracleResult res = farthest_2d(inst);
  CHECK(res.r0 == Catch::Approx(1.0));
}

TEST_CASE("empty intersection raises") {
  Instance inst;
  inst.q.dim = 2;
  inst.q.balls = {{pt(0, 0), 1.0}, {pt(5, 0), 1.0}};
  inst.c0 = pt(0, 0);
  inst.lambda = 0.5;
  CHECK_THROWS_AS(farthest_2d(inst), EmptyIntersection);
}

TEST_CASE("tangent disks give a single-point intersection") {
  Instance inst;
  inst.q.dim = 2;
  inst.q.balls = {{pt(0, 0), 1.0}, {pt(2, 0), 1.0}};
  inst.c0 = pt(0.2, 0);
  inst.lambda = 0.5;
  const OracleResult res = farthest_2d(inst);
  CHECK(res.r0 == Catch::Approx(0.8).margin(1e-9));
  CHECK((res.maximizers[0] - pt(1, 0)).norm() < 1e-8);
}

TEST_CASE("oracle maximizers are feasible and value is attained") {
  Rng rng(RngSeed{2712});
  for (int trial = 0; trial < 50; ++trial) {
    Instance inst;
    inst.q.dim = 2;
    const int m = 1 + static_cast<int>(rng.uniform01() * 5);
    for (int k = 0; k < m; ++k) {
      const Point c = rng.gaussian_vector(2);
      inst.q.balls.push_back({c, c.norm() + 0.2 + rng.uniform01()});
    }
    inst.c0 = 0.3 * rng.gaussian_vector(2);
    inst.lambda = 0.5;
    const OracleResult res = farthest_2d(inst);
    // Cross-check against a polar grid scan around c0.
    double grid_best = 0.0;
    for (int a = 0; a < 2000; ++a) {
      const double th = 2.0 * M_PI * a / 2000.0;
      // Walk outward along the ray until leaving Q.
      for (double r = res.r0 + 0.1; r > 0.0; r -= 1e-3) {
        const Point x = inst.c0 + r * pt(std::cos(th), std::sin(th));
        if (in_ballset(inst.q, x, 1e-12)) {
          grid_best = std::max(grid_best, r);
          break;
        }
      }
    }
    // The polar scan underestimates by up to one radial step plus the
    // angular quantization error.
    CHECK(res.r0 >= grid_best - 1e-9);
    CHECK(res.r0 <= grid_best + 5e-3);
    for (const Point& mpt : res.maximizers) {
      CHECK(h_value(inst.q, mpt) <= 1e-8);
      CHECK((mpt - inst.c0).norm() == Catch::Approx(res.r0).margin(1e-9));
    }
  }
}

TEST_CASE("arc fraction hand values") {
  // Element 0 of a single unit disk centered at c0: the full circle of
  // radius r < 1 lies inside, so the fraction is 1; for r > 1 it is 0.
  Instance inst;
  inst.q.dim = 2;
  inst.q.balls = {{pt(0, 0), 1.0}};
  inst.c0 = pt(0, 0);
  inst.lambda = 0.5;
  CHECK(arc_fraction_2d(inst, 0, 0.5) == Catch::Approx(1.0));
  CHECK(arc_fraction_2d(inst, 0, 1.5) == Catch::Approx(0.0));

  // Offset c0: the circle of radius r pokes out of the disk; a point at
  // angle t from c0 stays inside iff cos(t) <= (1 - r^2 - d^2)/(2 r d), so
  // the inside fraction is acos((r^2 + d^2 - 1)/(2 r d)) / pi.
  Instance off;
  off.q.dim = 2;
  off.q.balls = {{pt(0, 0), 1.0}};
  off.c0 = pt(0.4, 0);
  off.lambda = 0.5;
  const double r = 0.8, d = 0.4;
  const double t = std::acos((r * r + d * d - 1.0) / (2.0 * r * d));
  CHECK(arc_fraction_2d(off, 0, r) == Catch::Approx(t / M_PI).margin(1e-12));
}

TEST_CASE("area matches closed forms") {
  Instance inst;
  inst.q.dim = 2;
  inst.q.balls = {{pt(0, 0), 1.0}};
  inst.c0 = pt(0, 0);
  inst.lambda = 0.5;
  const double area = area_2d(inst, 0, 0.0, 0.002);
  CHECK(area == Catch::Approx(M_PI).margin(2e-2));
}
