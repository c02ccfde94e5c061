#include "core/hill.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace pfopt {

HillCurve hill_curve(std::span<const double> returns, TailSide tail, int k_max) {
  std::vector<double> x;
  x.reserve(returns.size());
  for (double r : returns) {
    require(std::isfinite(r), Errc::non_positive_tail_value, "non-finite return in Hill input");
    if (tail == TailSide::loss && r < 0.0) x.push_back(-r);
    if (tail == TailSide::gain && r > 0.0) x.push_back(r);
  }
  const auto n_tail = static_cast<int>(x.size());
  if (k_max <= 0) k_max = std::min(n_tail / 10, 1000);
  require(k_max >= 2, Errc::insufficient_tail, "tail sample too small for any k");
  require(n_tail >= k_max + 1, Errc::insufficient_tail,
          "need >= k_max + 1 tail observations, have " + std::to_string(n_tail));

  std::sort(x.begin(), x.end(), std::greater<>());
  std::vector<double> logs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) logs[i] = std::log(x[i]);

  constexpr double kZ975 = 1.959963984540054;
  HillCurve curve;
  double log_sum = logs[0];
  for (int k = 2; k <= k_max; ++k) {
    log_sum += logs[static_cast<std::size_t>(k - 1)];
    const double h = log_sum / static_cast<double>(k) - logs[static_cast<std::size_t>(k)];
    if (h <= 0.0) continue;  // exact ties through X_(k+1); the estimate diverges here
    const double a = 1.0 / h;
    const double half = kZ975 / std::sqrt(static_cast<double>(k));
    curve.k_values.push_back(k);
    curve.alpha.push_back(a);
    curve.ci_low.push_back(a * (1.0 - half));
    curve.ci_high.push_back(a * (1.0 + half));
  }
  require(!curve.k_values.empty(), Errc::insufficient_tail, "no usable k in the Hill range");
  return curve;
}

}  // namespace pfopt
