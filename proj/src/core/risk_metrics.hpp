#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pfopt {

// Daily-unit performance/risk ratio suite. Conventions:
//  - all ratios are per-day except Calmar, whose numerator is a 252-day CAGR;
//  - VaR/CVaR are signed returns (losses negative);
//  - the empirical quantile is Hyndman-Fan type 7 (linear interpolation).
struct RatioReport {
  double sharpe = 0.0;
  double sortino = 0.0;
  double calmar = 0.0;
  double starr95 = 0.0;
  double rachev = 0.0;
  double jensens_alpha = 0.0;
  double max_drawdown = 0.0;
  double var95 = 0.0;
  double cvar95 = 0.0;
  double var99 = 0.0;
  double cvar99 = 0.0;
  std::int64_t n_obs = 0;
};

double sharpe(std::span<const double> returns, std::span<const double> rf);
double max_drawdown(std::span<const double> prices);
double calmar(std::span<const double> prices);
double var(std::span<const double> returns, double confidence);
double cvar(std::span<const double> returns, double confidence);
double starr(std::span<const double> returns, std::span<const double> rf, double confidence);
// Expected tail gain over expected tail loss, both as magnitudes;
// alpha is the gain-tail level, beta the loss-tail level.
double rachev(std::span<const double> returns, double alpha = 0.95, double beta = 0.95);
double sortino(std::span<const double> returns, std::span<const double> rf);
double jensens_alpha(std::span<const double> returns, std::span<const double> benchmark,
                     std::span<const double> rf);

// Builds the full report; metrics whose preconditions fail are recorded as
// NaN instead of aborting the table.
RatioReport build_ratio_report(std::span<const double> returns, std::span<const double> rf,
                               std::span<const double> benchmark, double initial_price = 100.0);

// Compounded price path V(t) = initial * prod(1 + r).
std::vector<double> compound_prices(std::span<const double> returns, double initial);

}  // namespace pfopt
