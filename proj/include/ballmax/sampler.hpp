#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ballmax/rng.hpp"
#include "ballmax/sequence.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

struct EmptyElement : std::runtime_error {
  explicit EmptyElement(int i)
      : std::runtime_error("sequence element " + std::to_string(i) + " is empty") {}
};

struct DegenerateDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hit counts with a Wilson 95% score interval; it behaves sanely at 0 and
// at n hits, which is exactly the regime Procedure B operates in.
struct HitStats {
  std::int64_t samples = 0;
  std::int64_t hits = 0;
  double ratio = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 1.0;
};

inline HitStats make_hit_stats(std::int64_t hits, std::int64_t samples) {
  HitStats s;
  s.samples = samples;
  s.hits = hits;
  const double n = static_cast<double>(samples);
  const double p = samples > 0 ? static_cast<double>(hits) / n : 0.0;
  s.ratio = p;
  if (samples > 0) {
    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    s.wilson_low = std::max(0.0, (center - half) / denom);
    s.wilson_high = std::min(1.0, (center + half) / denom);
  }
  return s;
}

// Uniform points on the sphere of radius r about c0: per-coordinate normal
// draws, then radial normalization.
inline std::vector<Point> sphere_sample(const Point& c0, double r, std::int64_t n_samples,
                                        RngSeed seed) {
  if (r <= 0.0) throw InvalidInstance("sphere_sample: r must be positive");
  if (n_samples < 1) throw InvalidInstance("sphere_sample: need n_samples >= 1");
  Rng rng(seed);
  const int dim = static_cast<int>(c0.size());
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (std::int64_t s = 0; s < n_samples; ++s) {
    Point u = rng.gaussian_vector(dim);
    double norm = u.norm();
    while (norm < 1e-300) {
      u = rng.gaussian_vector(dim);
      norm = u.norm();
    }
    out.push_back(c0 + (r / norm) * u);
  }
  return out;
}

namespace sample_detail {

// Deterministic worker partition: chunk c gets substream(seed, c); hit counts
// sum, so the result depends only on (seed, workers).
template <typename CountFn>
std::int64_t parallel_count(std::int64_t n_samples, int workers, RngSeed seed,
                            CountFn&& count_chunk) {
  if (workers < 1) workers = 1;
  const std::int64_t base = n_samples / workers;
  const std::int64_t rem = n_samples % workers;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(workers), 0);
  auto run = [&](int c) {
    const std::int64_t chunk = base + (c < rem ? 1 : 0);
    if (chunk > 0) hits[static_cast<std::size_t>(c)] = count_chunk(chunk, substream(seed, static_cast<std::uint64_t>(c)));
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int c = 0; c < workers; ++c) pool.emplace_back(run, c);
    for (auto& t : pool) t.join();
  }
  std::int64_t total = 0;
  for (std::int64_t h : hits) total += h;
  return total;
}

}  // namespace sample_detail

// Empirical R_i(R): fraction of the sphere of radius r about C0 lying inside
// the sequence element Q_{r^2}^i.
inline HitStats surface_ratio(const Instance& inst, int i, double r, std::int64_t n_samples,
                              RngSeed seed, int workers = 1) {
  if (r <= 0.0) throw InvalidInstance("surface_ratio: r must be positive");
  const SequenceElement el = element_at(inst, i, r * r);
  if (el.empty()) throw EmptyElement(i);
  const std::int64_t hits = sample_detail::parallel_count(
      n_samples, workers, seed, [&](std::int64_t chunk, RngSeed s) {
        Rng rng(s);
        const int dim = inst.dim();
        std::int64_t h = 0;
        for (std::int64_t t = 0; t < chunk; ++t) {
          Point u = rng.gaussian_vector(dim);
          double norm = u.norm();
          while (norm < 1e-300) {
            u = rng.gaussian_vector(dim);
            norm = u.norm();
          }
          if (el.contains(inst.c0 + (r / norm) * u)) ++h;
        }
        return h;
      });
  return make_hit_stats(hits, n_samples);
}

// Hit-or-miss estimate of Vol(Q^{i+p} inter Q^i) / Vol(Q^{i+p}) at probe
// radius r.  Sampling ball: the smallest ball of the i+p element (any single
// ball contains the intersection).
inline HitStats volume_ratio(const Instance& inst, int i, int p, double r,
                             std::int64_t n_samples, RngSeed seed, int workers = 1) {
  if (p < 1) throw InvalidInstance("volume_ratio: p must be positive");
  const double r_sq = r * r;
  const SequenceElement el_i = element_at(inst, i, r_sq);
  const SequenceElement el_ip = element_at(inst, i + p, r_sq);
  if (el_ip.empty()) throw EmptyElement(i + p);

  std::size_t smallest = 0;
  for (std::size_t k = 1; k < el_ip.radii_sq.size(); ++k)
    if (el_ip.radii_sq[k] < el_ip.radii_sq[smallest]) smallest = k;
  const Point bc = el_ip.centers[smallest];
  const double br = std::sqrt(el_ip.radii_sq[smallest]);
  const int dim = inst.dim();

  // Two counters per chunk, so this does not reuse parallel_count.
  std::vector<std::int64_t> den_parts, num_parts;
  int w = workers < 1 ? 1 : workers;
  const std::int64_t base = n_samples / w;
  const std::int64_t rem = n_samples % w;
  den_parts.assign(static_cast<std::size_t>(w), 0);
  num_parts.assign(static_cast<std::size_t>(w), 0);
  auto run = [&](int c) {
    const std::int64_t chunk = base + (c < rem ? 1 : 0);
    Rng rng(substream(seed, static_cast<std::uint64_t>(c)));
    std::int64_t den = 0, num = 0;
    for (std::int64_t t = 0; t < chunk; ++t) {
      Point u = rng.gaussian_vector(dim);
      double norm = u.norm();
      while (norm < 1e-300) {
        u = rng.gaussian_vector(dim);
        norm = u.norm();
      }
      const double rad = br * std::pow(rng.uniform01(), 1.0 / dim);
      const Point x = bc + (rad / norm) * u;
      if (!el_ip.contains(x)) continue;
      ++den;
      if (el_i.contains(x)) ++num;
    }
    den_parts[static_cast<std::size_t>(c)] = den;
    num_parts[static_cast<std::size_t>(c)] = num;
  };
  if (w == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int c = 0; c < w; ++c) pool.emplace_back(run, c);
    for (auto& t : pool) t.join();
  }
  std::int64_t den = 0, num = 0;
  for (int c = 0; c < w; ++c) {
    den += den_parts[static_cast<std::size_t>(c)];
    num += num_parts[static_cast<std::size_t>(c)];
  }
  if (den < 100)
    throw DegenerateDenominator("fewer than 100 denominator hits (" +
                                std::to_string(den) + ")");
  return make_hit_stats(num, den);
}

}  // namespace ballmax
