#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ballmax/geometry.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

struct SolverOpts {
  double tol = 1e-8;       // argument-norm accuracy target
  double feas_tol = 1e-9;  // tolerance on h(y) <= 1
  int max_iter = 200000;
  double activity_tol = 1e-8;  // relative, for "which piece attains the max"
  std::optional<Point> start;  // override feasible_start
};

struct DcSolution {
  Point y_star;
  double value = 0.0;    // h(y*) - g_lambda(y*)
  double r_lower = 0.0;  // sqrt(-value) when value <= 0
  double h_at_y = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct NoFeasibleStart : std::runtime_error {
  NoFeasibleStart() : std::runtime_error("no point with h(x) <= 1 found; Q is empty") {}
};

struct MaxIterExceeded : std::runtime_error {
  explicit MaxIterExceeded(DcSolution best_)
      : std::runtime_error("solver iteration budget exhausted"), best(std::move(best_)) {}
  DcSolution best;
};

namespace opt {

// scale * ||x - center||^2 + offset
struct Quad {
  Point center;
  double offset = 0.0;
  double scale = 1.0;

  double eval(const Point& x) const { return scale * (x - center).squaredNorm() + offset; }
  Point grad(const Point& x) const { return 2.0 * scale * (x - center); }
};

// ||x - center||^2 <= radius_sq
struct BallCon {
  Point center;
  double radius_sq = 0.0;

  double eval(const Point& x) const { return (x - center).squaredNorm() - radius_sq; }
  Point grad(const Point& x) const { return 2.0 * (x - center); }
};

inline std::pair<double, int> eval_max(const std::vector<Quad>& quads, const Point& x) {
  double best = -std::numeric_limits<double>::infinity();
  int arg = 0;
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const double v = quads[k].eval(x);
    if (v > best) {
      best = v;
      arg = static_cast<int>(k);
    }
  }
  return {best, arg};
}

inline double max_violation(const std::vector<BallCon>& cons, const Point& x) {
  double v = 0.0;
  for (const BallCon& c : cons) v = std::max(v, c.eval(x));
  return v;
}

// Dykstra's alternating projections onto the intersection of balls.
inline Point project_intersection(const std::vector<BallCon>& cons, Point x,
                                  double feas_tol, int max_sweeps = 200) {
  if (cons.empty()) return x;
  std::vector<Point> corr(cons.size(), Point::Zero(x.size()));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < cons.size(); ++j) {
      const Point y = x + corr[j];
      const double d = (y - cons[j].center).norm();
      const double r = std::sqrt(cons[j].radius_sq);
      Point proj = y;
      if (d > r) proj = cons[j].center + (r / d) * (y - cons[j].center);
      corr[j] = y - proj;
      x = proj;
    }
    if (max_violation(cons, x) <= feas_tol) break;
  }
  return x;
}

struct MinimizeResult {
  Point x;
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Projection of v onto the probability simplex (Condat / sort-based).
inline Eigen::VectorXd project_simplex(Eigen::VectorXd v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  return (v.array() - theta).max(0.0).matrix();
}

// Min-norm convex combination of active piece gradients plus the constraint
// normal cone at x; serves as the reported optimality certificate.
inline double stationarity_residual(const std::vector<Quad>& quads,
                                    const std::vector<BallCon>& cons, const Point& x,
                                    double activity_tol, double feas_tol) {
  const auto [fmax, arg] = eval_max(quads, x);
  (void)arg;
  const double act = activity_tol * (1.0 + std::abs(fmax));
  std::vector<int> active_q, active_c;
  for (std::size_t k = 0; k < quads.size(); ++k)
    if (quads[k].eval(x) >= fmax - act) active_q.push_back(static_cast<int>(k));
  for (std::size_t j = 0; j < cons.size(); ++j)
    if (cons[j].eval(x) >= -std::max(feas_tol, 1e-7) * (1.0 + cons[j].radius_sq))
      active_c.push_back(static_cast<int>(j));

  const int n = static_cast<int>(x.size());
  const int a = static_cast<int>(active_q.size());
  const int c = static_cast<int>(active_c.size());
  Eigen::MatrixXd g(n, a);
  for (int t = 0; t < a; ++t) g.col(t) = quads[static_cast<std::size_t>(active_q[t])].grad(x);
  Eigen::MatrixXd hmat(n, std::max(c, 1));
  for (int t = 0; t < c; ++t) hmat.col(t) = cons[static_cast<std::size_t>(active_c[t])].grad(x);

  Eigen::VectorXd w = Eigen::VectorXd::Constant(a, 1.0 / a);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(std::max(c, 1));
  double lip = g.squaredNorm();
  if (c > 0) lip += hmat.leftCols(c).squaredNorm();
  lip = std::max(lip, 1e-12);
  const double step = 1.0 / (2.0 * lip);
  for (int it = 0; it < 2000; ++it) {
    Point r = g * w;
    if (c > 0) r += hmat.leftCols(c) * nu.head(c);
    const Eigen::VectorXd gw = 2.0 * g.transpose() * r;
    w = project_simplex(w - step * gw);
    if (c > 0) {
      const Eigen::VectorXd gnu = 2.0 * hmat.leftCols(c).transpose() * r;
      nu.head(c) = (nu.head(c) - step * gnu).array().max(0.0);
    }
  }
  Point r = g * w;
  if (c > 0) r += hmat.leftCols(c) * nu.head(c);
  return r.norm();
}

namespace detail {

struct KktSolve {
  bool ok = false;
  Point x;
  Eigen::VectorXd w;
  Eigen::VectorXd nu;
};

// Newton on the equality KKT system for a fixed guess of active pieces A and
// active constraints J.
inline KktSolve solve_kkt(const std::vector<Quad>& quads, const std::vector<BallCon>& cons,
                          const std::vector<int>& active_q, const std::vector<int>& active_c,
                          const Point& x0) {
  const int n = static_cast<int>(x0.size());
  const int a = static_cast<int>(active_q.size());
  const int c = static_cast<int>(active_c.size());
  const int dim = n + a + c;

  Point x = x0;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(a, 1.0 / a);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(c);

  double scale = 1.0;
  for (int t = 0; t < a; ++t)
    scale = std::max(scale, quads[static_cast<std::size_t>(active_q[t])].center.norm());
  scale = std::max(scale, x0.norm());

  auto residual = [&](const Point& xx, const Eigen::VectorXd& ww,
                      const Eigen::VectorXd& nn) {
    Eigen::VectorXd res = Eigen::VectorXd::Zero(dim);
    Point r1 = Point::Zero(n);
    for (int t = 0; t < a; ++t) r1 += ww(t) * quads[static_cast<std::size_t>(active_q[t])].grad(xx);
    for (int t = 0; t < c; ++t) r1 += nn(t) * cons[static_cast<std::size_t>(active_c[t])].grad(xx);
    res.head(n) = r1;
    const double f0 = quads[static_cast<std::size_t>(active_q[0])].eval(xx);
    for (int t = 1; t < a; ++t)
      res(n + t - 1) = quads[static_cast<std::size_t>(active_q[t])].eval(xx) - f0;
    res(n + a - 1) = ww.sum() - 1.0;
    for (int t = 0; t < c; ++t)
      res(n + a + t) = cons[static_cast<std::size_t>(active_c[t])].eval(xx);
    return res;
  };

  Eigen::VectorXd res = residual(x, w, nu);
  for (int iter = 0; iter < 80; ++iter) {
    if (res.norm() <= 1e-12 * scale * scale) break;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    double hess = 0.0;
    for (int t = 0; t < a; ++t) hess += 2.0 * w(t) * quads[static_cast<std::size_t>(active_q[t])].scale;
    for (int t = 0; t < c; ++t) hess += 2.0 * nu(t);
    jac.topLeftCorner(n, n) = hess * Eigen::MatrixXd::Identity(n, n);
    for (int t = 0; t < a; ++t)
      jac.block(0, n + t, n, 1) = quads[static_cast<std::size_t>(active_q[t])].grad(x);
    for (int t = 0; t < c; ++t)
      jac.block(0, n + a + t, n, 1) = cons[static_cast<std::size_t>(active_c[t])].grad(x);
    const Point g0 = quads[static_cast<std::size_t>(active_q[0])].grad(x);
    for (int t = 1; t < a; ++t)
      jac.block(n + t - 1, 0, 1, n) =
          (quads[static_cast<std::size_t>(active_q[t])].grad(x) - g0).transpose();
    jac.block(n + a - 1, n, 1, a).setOnes();
    for (int t = 0; t < c; ++t)
      jac.block(n + a + t, 0, 1, n) = cons[static_cast<std::size_t>(active_c[t])].grad(x).transpose();

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) return {};
    const Eigen::VectorXd dz = lu.solve(-res);

    // Damped update: halve until the residual decreases.
    double alpha = 1.0;
    for (int ls = 0; ls < 30; ++ls) {
      const Point x_try = x + alpha * dz.head(n);
      const Eigen::VectorXd w_try = w + alpha * dz.segment(n, a);
      const Eigen::VectorXd nu_try = nu + alpha * dz.tail(c);
      const Eigen::VectorXd res_try = residual(x_try, w_try, nu_try);
      if (res_try.norm() < res.norm() || alpha < 1e-8) {
        x = x_try;
        w = w_try;
        nu = nu_try;
        res = res_try;
        break;
      }
      alpha *= 0.5;
    }
  }
  if (res.norm() > 1e-9 * scale * scale) return {};
  return {true, x, w, nu};
}

}  // namespace detail

// Exact finish: identify the active pieces/constraints near x and solve the
// KKT system, adjusting the guess until multipliers and feasibility check out.
inline std::optional<Point> active_set_polish(const std::vector<Quad>& quads,
                                              const std::vector<BallCon>& cons,
                                              const Point& x_in, double feas_tol) {
  const int n = static_cast<int>(x_in.size());
  const auto [fmax, arg] = eval_max(quads, x_in);
  (void)arg;

  // Seed the guess with pieces near the max, largest first, at most n+1.
  std::vector<int> order(quads.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return quads[static_cast<std::size_t>(i)].eval(x_in) > quads[static_cast<std::size_t>(j)].eval(x_in);
  });
  const double act = 1e-5 * (1.0 + std::abs(fmax));
  std::vector<int> active_q;
  for (int k : order) {
    if (quads[static_cast<std::size_t>(k)].eval(x_in) < fmax - act) break;
    if (static_cast<int>(active_q.size()) >= n + 1) break;
    active_q.push_back(k);
  }
  std::vector<int> active_c;
  for (std::size_t j = 0; j < cons.size(); ++j)
    if (cons[j].eval(x_in) >= -1e-6 * (1.0 + cons[j].radius_sq))
      active_c.push_back(static_cast<int>(j));

  for (int round = 0; round < 50; ++round) {
    if (active_q.empty()) return std::nullopt;
    const auto sol = detail::solve_kkt(quads, cons, active_q, active_c, x_in);
    if (!sol.ok) return std::nullopt;

    // Drop the most negative multiplier, if any.
    int drop_q = -1, drop_c = -1;
    double worst = -1e-9;
    for (int t = 0; t < sol.w.size(); ++t)
      if (sol.w(t) < worst) {
        worst = sol.w(t);
        drop_q = t;
      }
    worst = -1e-9;
    for (int t = 0; t < sol.nu.size(); ++t)
      if (sol.nu(t) < worst) {
        worst = sol.nu(t);
        drop_c = t;
      }
    if (drop_q >= 0 && active_q.size() > 1) {
      active_q.erase(active_q.begin() + drop_q);
      continue;
    }
    if (drop_c >= 0) {
      active_c.erase(active_c.begin() + drop_c);
      continue;
    }

    // Add a violated piece or constraint, if any.
    const double f_active = quads[static_cast<std::size_t>(active_q[0])].eval(sol.x);
    int add_q = -1;
    double excess = 1e-10 * (1.0 + std::abs(f_active));
    for (std::size_t k = 0; k < quads.size(); ++k) {
      if (std::find(active_q.begin(), active_q.end(), static_cast<int>(k)) != active_q.end())
        continue;
      const double e = quads[k].eval(sol.x) - f_active;
      if (e > excess) {
        excess = e;
        add_q = static_cast<int>(k);
      }
    }
    if (add_q >= 0 && static_cast<int>(active_q.size()) <= n) {
      active_q.push_back(add_q);
      continue;
    }
    int add_c = -1;
    double viol = feas_tol;
    for (std::size_t j = 0; j < cons.size(); ++j) {
      if (std::find(active_c.begin(), active_c.end(), static_cast<int>(j)) != active_c.end())
        continue;
      const double e = cons[j].eval(sol.x);
      if (e > viol) {
        viol = e;
        add_c = static_cast<int>(j);
      }
    }
    if (add_c >= 0) {
      active_c.push_back(add_c);
      continue;
    }
    if (add_q >= 0) return std::nullopt;  // active set larger than n+1: give up
    return sol.x;
  }
  return std::nullopt;
}

// Projected subgradient with adaptive Polyak levels on a strongly convex
// max-of-quadratics over an intersection of balls, finished by the active-set
// Newton polish when it certifies an improvement.
inline MinimizeResult minimize_max_quad(const std::vector<Quad>& quads,
                                        const std::vector<BallCon>& cons, const Point& x0,
                                        const SolverOpts& opts) {
  Point x = project_intersection(cons, x0, opts.feas_tol);
  auto [f_best, arg0] = eval_max(quads, x);
  (void)arg0;
  Point x_best = x;

  double min_scale = std::numeric_limits<double>::infinity();
  for (const Quad& q : quads) min_scale = std::min(min_scale, q.scale);
  const double value_tol = 0.5 * min_scale * opts.tol * opts.tol;

  double delta = 0.1 * (1.0 + std::abs(f_best));
  int since_progress = 0;
  int iter = 0;
  const int polish_every = 500;

  MinimizeResult out;
  while (iter < opts.max_iter) {
    for (int t = 0; t < polish_every && iter < opts.max_iter; ++t, ++iter) {
      const auto [f, k] = eval_max(quads, x);
      if (f < f_best - 0.25 * delta) {
        f_best = f;
        x_best = x;
        since_progress = 0;
      } else if (++since_progress > 50) {
        delta *= 0.5;
        since_progress = 0;
      }
      const Point g = quads[static_cast<std::size_t>(k)].grad(x);
      const double gn2 = std::max(g.squaredNorm(), 1e-300);
      const double step = (f - (f_best - delta)) / gn2;
      x = project_intersection(cons, x - step * g, opts.feas_tol, 60);
    }

    const auto polished = active_set_polish(quads, cons, x_best, opts.feas_tol);
    if (polished) {
      const auto [f_pol, kp] = eval_max(quads, *polished);
      (void)kp;
      if (f_pol <= f_best + 1e-12 * (1.0 + std::abs(f_best)) &&
          max_violation(cons, *polished) <= 10.0 * opts.feas_tol) {
        out.x = *polished;
        out.value = f_pol;
        out.iterations = iter;
        out.residual = stationarity_residual(quads, cons, out.x, opts.activity_tol, opts.feas_tol);
        out.converged = out.residual <= std::max(opts.tol, 1e-7 * (1.0 + std::abs(f_pol)));
        if (out.converged) return out;
      }
    }
    if (delta < value_tol) break;
  }

  out.x = x_best;
  out.value = f_best;
  out.iterations = iter;
  out.residual = stationarity_residual(quads, cons, x_best, opts.activity_tol, opts.feas_tol);
  out.converged = out.residual <= std::max(opts.tol, 1e-6 * (1.0 + std::abs(f_best)));
  return out;
}

}  // namespace opt

// A point with h <= 1, probed from ball centers, their centroid and c0, or by
// minimizing h itself as a last resort.
inline Point feasible_start(const Instance& inst) {
  validate(inst);
  std::vector<Point> probes;
  Point centroid = Point::Zero(inst.dim());
  for (const Ball& b : inst.q.balls) {
    probes.push_back(b.center);
    centroid += b.center;
  }
  centroid /= static_cast<double>(inst.q.size());
  probes.push_back(centroid);
  probes.push_back(inst.c0);
  for (const Point& p : probes)
    if (h_value(inst.q, p) <= 1.0) return p;

  std::vector<opt::Quad> quads;
  for (const Ball& b : inst.q.balls)
    quads.push_back(opt::Quad{b.center, -b.radius * b.radius, 1.0});
  SolverOpts opts;
  const auto res = opt::minimize_max_quad(quads, {}, centroid, opts);
  if (res.value > 1.0) throw NoFeasibleStart();
  return res.x;
}

// Solve H* = argmin { h(x) - g_lambda(x) : h(x) <= 1 }  and derive R_lower.
inline DcSolution minimize_dc(const Instance& inst, const SolverOpts& opts = {}) {
  validate(inst);
  if (opts.tol <= 0.0 || opts.max_iter < 1)
    throw InvalidInstance("minimize_dc: bad solver options");

  std::vector<opt::Quad> quads;
  std::vector<opt::BallCon> cons;
  for (std::size_t k = 0; k < inst.q.size(); ++k) {
    const DcPiece p = dc_piece(inst, static_cast<int>(k));
    quads.push_back(opt::Quad{p.center, p.offset, p.scale});
    const Ball& b = inst.q.balls[k];
    cons.push_back(opt::BallCon{b.center, b.radius * b.radius + 1.0});
  }

  const Point x0 = opts.start ? *opts.start : feasible_start(inst);
  const auto res = opt::minimize_max_quad(quads, cons, x0, opts);

  DcSolution sol;
  sol.y_star = res.x;
  sol.value = res.value;
  sol.r_lower = res.value <= 0.0 ? std::sqrt(-res.value) : 0.0;
  sol.h_at_y = h_value(inst.q, res.x);
  sol.iterations = res.iterations;
  sol.residual = res.residual;
  sol.converged = res.converged;
  if (!sol.converged) throw MaxIterExceeded(sol);
  return sol;
}

}  // namespace ballmax
