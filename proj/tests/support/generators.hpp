#pragma once

// Seeded generators for the property tests. Every property runs on a fixed
// seed so failures reproduce; the seed is printed on failure via INFO.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "loewner/exact_maps.hpp"
#include "loewner/types.hpp"

namespace loewner::testing {

inline constexpr std::uint64_t kSeed = 20260417;

class Gen {
 public:
  explicit Gen(std::uint64_t seed = kSeed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Point of the box [-re_max, re_max] x [im_min, im_max] at least `gap`
  /// away from the segment [0, i 2 sqrt(t0)].
  Complex off_slit(double t0, double re_max = 5.0, double im_min = 0.1,
                   double im_max = 5.0, double gap = 0.05) {
    for (;;) {
      const Complex z{uniform(-re_max, re_max), uniform(im_min, im_max)};
      if (distance_to_slit(z, t0) >= gap) return z;
    }
  }

  std::vector<Complex> off_slit_points(int n, double t0) {
    std::vector<Complex> out;
    for (int k = 0; k < n; ++k) out.push_back(off_slit(t0));
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

/// Caption scenarios: t0 = 1, T = 3.
inline std::vector<Scenario> caption_scenarios() {
  return {Scenario::theorem_one(2.5, 1.0, 3.0), Scenario::theorem_one(1.5, 1.0, 3.0),
          Scenario::theorem_one(2.0, 1.0, 3.0), Scenario::theorem_two(3.0, 1.0, 3.0)};
}

}  // namespace loewner::testing
