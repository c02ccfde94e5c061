#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/portfolio.hpp"

namespace pfopt {

struct MomentEstimates {
  Eigen::VectorXd mean;  // per-day
  Eigen::MatrixXd cov;   // per-day^2, symmetric positive definite after jitter
  double jitter = 0.0;   // ridge added to reach positive definiteness
};

// Scalars of the closed-form frontier: A = r'S^-1 r, B = e'S^-1 e,
// C = r'S^-1 e, delta = AB - C^2. The frontier in (stdev, mean) space is the
// hyperbola sigma^2 = (B m^2 - 2C m + A) / delta.
struct FrontierCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double delta = 0.0;
  bool degenerate = false;  // delta ~ 0 (means proportional to ones, or zero)
};

struct FrontierPoint {
  double target_return = 0.0;
  double mean = 0.0;
  double stdev = 0.0;
  WeightVector weights;
};

struct FrontierCurve {
  std::vector<FrontierPoint> points;
  int skipped = 0;  // infeasible / failed targets
};

struct CmlLine {
  double intercept = 0.0;  // the per-day risk-free rate
  double slope = 0.0;      // tangency Sharpe ratio
};

// Sample mean and covariance (T-1 denominator) of a window of returns
// (rows = days). Symmetrizes and adds an escalating trace-scaled ridge until
// the covariance factorizes.
MomentEstimates estimate_moments(const Eigen::MatrixXd& window);

FrontierCoefficients frontier_coefficients(const MomentEstimates& m);

// Closed-form frontier weights for a target mean (long-short, no bounds).
FrontierPoint solve_unconstrained(const MomentEstimates& m, double target_return,
                                  const std::vector<std::string>& tickers = {});

FrontierPoint min_variance_portfolio(const MomentEstimates& m, Regime regime,
                                     const std::vector<std::string>& tickers = {});

FrontierPoint tangency_portfolio(const MomentEstimates& m, double rf_daily, Regime regime,
                                 const std::vector<std::string>& tickers = {});

FrontierCurve frontier_curve(const MomentEstimates& m, int n_points, Regime regime,
                             const std::vector<std::string>& tickers = {});

CmlLine capital_market_line(const FrontierPoint& tangency, double rf_daily);

}  // namespace pfopt
