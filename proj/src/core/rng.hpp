#pragma once

#include <cmath>
#include <cstdint>

#include "core/stats.hpp"

namespace pfopt {

// Deterministic counter-style generator: each (seed, stream) pair is an
// independent SplitMix64 sequence, so independent work items can draw from
// their own streams in any order (or in parallel) and still reproduce
// bit-identical results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform on the open interval (0,1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() { return stats::norm_quantile(next_uniform()); }

  // Marsaglia-Tsang; valid for shape >= 1 (all uses here have shape > 1).
  double next_gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double next_chisq(double df) { return 2.0 * next_gamma(df / 2.0); }

  double next_student_t(double nu) {
    const double z = next_normal();
    const double w = next_chisq(nu) / nu;
    return z / std::sqrt(w);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace pfopt
