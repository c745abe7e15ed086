#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "ballmax/classify.hpp"
#include "ballmax/sampler.hpp"
#include "ballmax/sequence.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

struct NoInitialHit : std::runtime_error {
  explicit NoInitialHit(double r)
      : std::runtime_error("no sphere sample hits the element at r_init = " +
                           std::to_string(r) + "; lower r_init or raise n_samples") {}
};

struct InconsistentBracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EstimateMethod { ProcedureB, VolumeBisection };

struct EstimateReport {
  double r_hat = 0.0;
  double r_low = 0.0;
  double r_high = 0.0;
  EstimateMethod method = EstimateMethod::ProcedureB;
  int i_used = 0;
  std::optional<int> p_used;
  std::vector<std::pair<double, HitStats>> stats_trace;
  RngSeed seed;
  int workers = 1;
  std::optional<Classification> classification;
};

// Profile value (r_{k,-i}^2 - R^2) / ||C_{k,-i} - C0|| for the shape-function
// diagnostics, with the sign regime of b_k recorded.
struct FkProfile {
  int k = 0;
  int i = 0;  // backward index magnitude, i >= 1
  double value = 0.0;
  double b_k = 0.0;
  bool proof_regime = false;  // b_k <= 0, the regime the proof operates in
  bool degenerate = false;    // C_k == C0, denominator vanishes
};

// Algorithm 2: grow r while any sphere sample hits Q_{r^2}^i, then bisect the
// first all-miss bracket with fresh substream seeds.
inline EstimateReport procedure_b(const Instance& inst, int i, double r_init,
                                  std::int64_t n_samples, double step, RngSeed seed,
                                  int workers = 1, int bisect_iters = 20) {
  validate(inst);
  if (i > -1) throw InvalidInstance("procedure_b: i must be <= -1");
  if (!(r_init > 0.0) || !(step > 0.0))
    throw InvalidInstance("procedure_b: r_init and step must be positive");

  EstimateReport rep;
  rep.method = EstimateMethod::ProcedureB;
  rep.i_used = i;
  rep.seed = seed;
  rep.workers = workers;

  std::uint64_t round = 0;
  auto probe = [&](double r) {
    return surface_ratio(inst, i, r, n_samples, substream(seed, round++), workers);
  };

  double r = r_init;
  HitStats st = probe(r);
  rep.stats_trace.emplace_back(r, st);
  if (st.hits == 0) throw NoInitialHit(r_init);

  double last_hit = r;
  double first_miss = 0.0;
  const int max_steps = 1000000;
  for (int t = 0; t < max_steps; ++t) {
    r += step;
    st = probe(r);
    rep.stats_trace.emplace_back(r, st);
    if (st.hits == 0) {
      first_miss = r;
      break;
    }
    last_hit = r;
  }
  if (first_miss == 0.0)
    throw InconsistentBracket("expansion never reached an all-miss radius");

  double lo = last_hit, hi = first_miss;
  for (int t = 0; t < bisect_iters; ++t) {
    const double mid = 0.5 * (lo + hi);
    st = probe(mid);
    if (st.hits > 0)
      lo = mid;
    else
      hi = mid;
  }
  rep.r_low = lo;
  rep.r_high = hi;
  rep.r_hat = 0.5 * (lo + hi);
  return rep;
}

// Bisection on V(R) = Vol(Q^{i+p} inter Q^i)/Vol(Q^{i+p}): the high
// end moves down when the ratio is statistically one (Wilson lower bound at
// or above `threshold`), otherwise the low end moves up.
inline EstimateReport volume_bisect(const Instance& inst, int i, int p,
                                    std::pair<double, double> r_bracket,
                                    std::int64_t n_samples, double threshold, RngSeed seed,
                                    int workers = 1, int max_rounds = 12,
                                    double min_rel_width = 0.0, int confirmations = 2) {
  validate(inst);
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InvalidInstance("volume_bisect: threshold must lie in (0,1)");
  if (!(r_bracket.first > 0.0 && r_bracket.second > r_bracket.first))
    throw InvalidInstance("volume_bisect: bad bracket");

  EstimateReport rep;
  rep.method = EstimateMethod::VolumeBisection;
  rep.i_used = i;
  rep.p_used = p;
  rep.seed = seed;
  rep.workers = workers;

  std::uint64_t round = 0;
  // A miss (sample of Q^{i+p} outside Q^i) certifies r < R0, while at
  // r >= R0 the containment is exact and every sample hits.  Declaring
  // "ratio = 1" therefore requires a clean sweep (plus the Wilson-low
  // threshold), confirmed on two fresh substreams before the high end moves
  // down.
  auto is_one = [&](double r) {
    for (int rep_try = 0; rep_try < confirmations; ++rep_try) {
      HitStats st;
      try {
        st = volume_ratio(inst, i, p, r, n_samples, substream(seed, round++), workers);
      } catch (const EmptyElement&) {
        // For indices >= 0 the element only vanishes above R0 (the base set
        // Q_{r^2} empties past r_upper, forward elements even sooner), so its
        // emptiness certifies "ratio = 1" vacuously.  Backward elements can
        // vanish below R0 as well, so for them emptiness stays an error.
        if (i + p >= 0) return true;
        throw;
      }
      rep.stats_trace.emplace_back(r, st);
      if (st.hits < st.samples || st.wilson_low < threshold) return false;
    }
    return true;
  };

  double lo = r_bracket.first, hi = r_bracket.second;
  if (is_one(lo) || !is_one(hi))
    throw InconsistentBracket("bracket endpoints classify identically");
  for (int t = 0; t < max_rounds; ++t) {
    // Stop refining once the bracket reaches the sampler's resolution: below
    // that width a clean sweep no longer distinguishes "at R0" from "just
    // under R0", and further halving would only bias the high end downward.
    if (hi - lo <= min_rel_width * 0.5 * (hi + lo)) break;
    const double mid = 0.5 * (lo + hi);
    if (is_one(mid))
      hi = mid;
    else
      lo = mid;
  }
  rep.r_low = lo;
  rep.r_high = hi;
  rep.r_hat = 0.5 * (lo + hi);
  return rep;
}

struct ZeroDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (1 / (1 - x/n))^{n-1} for x = alpha/R, evaluated stably; tends to e^x.
inline double analytic_growth_factor(std::int64_t n, double x) {
  return std::exp(-(static_cast<double>(n) - 1.0) * std::log1p(-x / static_cast<double>(n)));
}

// Empirical ratio R_i(r - alpha/n) / R_i(r) next to the finite-n analytic
// factor (1 / (1 - alpha/(r n)))^{n-1}; the caller compares the two.
inline std::pair<double, double> lemma23_ratio(const Instance& inst, int i, double r,
                                               double alpha, std::int64_t n_samples,
                                               RngSeed seed, int workers = 1) {
  if (alpha < 0.0) throw InvalidInstance("lemma23_ratio: alpha must be >= 0");
  const int n = inst.dim();
  const HitStats denom = surface_ratio(inst, i, r, n_samples, substream(seed, 0), workers);
  if (denom.hits == 0) throw ZeroDenominator("zero hits on the r-sphere");
  const double r_shift = r - alpha / static_cast<double>(n);
  if (r_shift <= 0.0) throw InvalidInstance("lemma23_ratio: alpha too large for r");
  const HitStats numer = surface_ratio(inst, i, r_shift, n_samples, substream(seed, 1), workers);
  const double empirical = numer.ratio / denom.ratio;
  const double bound = analytic_growth_factor(n, alpha / r);
  return {empirical, bound};
}

inline std::vector<FkProfile> fk_profile(const Instance& inst, double r,
                                         const std::vector<int>& i_list) {
  validate(inst);
  const double r_sq = r * r;
  std::vector<FkProfile> out;
  for (int i : i_list) {
    if (i > -1) throw InvalidInstance("fk_profile: indices must be <= -1");
    const auto centers = backward_centers(inst, -i);
    const auto radii_sq = backward_radii_sq(inst, -i, r_sq);
    for (std::size_t k = 0; k < centers.size(); ++k) {
      FkProfile f;
      f.k = static_cast<int>(k);
      f.i = i;
      const Ball& b = inst.q.balls[k];
      const double d0 = (b.center - inst.c0).norm();
      if (d0 < 1e-14) {
        f.degenerate = true;
        out.push_back(f);
        continue;
      }
      f.b_k = (b.radius * b.radius - r_sq - d0 * d0) / d0;
      f.proof_regime = f.b_k <= 0.0;
      const double di = (centers[k] - inst.c0).norm();
      f.value = (radii_sq[k] - r_sq) / di;
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace ballmax
