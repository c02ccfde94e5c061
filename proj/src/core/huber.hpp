#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/market_data.hpp"

namespace pfopt {

struct RobustFit {
  double alpha = 0.0;  // intercept, per-day
  double beta = 0.0;   // slope
  double se_alpha = 0.0;
  double se_beta = 0.0;
  std::pair<double, double> ci95_alpha;
  std::pair<double, double> ci95_beta;
  int n_obs = 0;
  double scale = 0.0;  // robust residual scale (normalized MAD)
  bool converged = true;
  int iterations = 0;
  std::string ticker;
  std::string benchmark;
};

// Huber-loss linear regression y = alpha + beta x by IRLS. The scale is
// re-estimated each sweep from the residual MAD; Wald intervals use
// sandwich-form standard errors.
RobustFit huber_fit(std::span<const double> y, std::span<const double> x, double tuning = 1.345);

// One fit per panel column against a shared benchmark series.
std::vector<RobustFit> benchmark_panel_fit(const ReturnPanel& panel,
                                           std::span<const double> benchmark,
                                           double tuning = 1.345);

}  // namespace pfopt
