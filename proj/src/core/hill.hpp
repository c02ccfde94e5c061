#pragma once

#include <span>
#include <vector>

namespace pfopt {

enum class TailSide { loss, gain };

// Hill tail-index estimates alpha(k) = 1 / H(k) over the number of upper
// order statistics k, with the 95% Wald band alpha * (1 -+ z / sqrt(k)).
struct HillCurve {
  std::vector<int> k_values;
  std::vector<double> alpha;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
};

// The loss tail uses -r restricted to r < 0; the gain tail uses r > 0.
// k_max <= 0 selects the default min(n_tail / 10, 1000).
HillCurve hill_curve(std::span<const double> returns, TailSide tail, int k_max = 0);

}  // namespace pfopt
