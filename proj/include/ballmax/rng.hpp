#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace ballmax {

struct RngSeed {
  std::uint64_t seed = 0;
};

// Deterministic 64-bit generator: xoshiro256++ seeded through splitmix64.
// The stream depends only on the seed value, never on the platform's
// <random> distributions, so identical seeds give bit-identical samples.
class Rng {
 public:
  explicit Rng(RngSeed seed) {
    std::uint64_t s = seed.seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of mantissa.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; caches the second variate.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    cached_ = mag * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd gaussian_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian();
    return v;
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Independent substream for a worker or a retry round.
inline RngSeed substream(RngSeed base, std::uint64_t index) {
  std::uint64_t x = base.seed ^ (0xd1342543de82ef95ULL * (index + 1));
  return RngSeed{Rng::splitmix64(x)};
}

}  // namespace ballmax
