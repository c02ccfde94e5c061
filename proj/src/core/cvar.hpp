#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/portfolio.hpp"

namespace pfopt {

// Scenario-based CVaR optimization input. Rows of `scenarios` are joint
// return draws (historical window rows, or simulated next-day scenarios).
struct CvarProblem {
  Eigen::MatrixXd scenarios;  // S x N
  double confidence = 0.95;
  double rf_daily = 0.0;
  Regime regime = Regime::long_only;
  double box_bound = 1.0;  // |w_i| <= box_bound under long_short
};

struct CvarSolution {
  WeightVector weights;
  double cvar = 0.0;  // return-space CVaR of the optimal portfolio (losses negative)
  double var = 0.0;   // return-space VaR at the same level
  int lp_iterations = 0;
};

struct StarrSolution {
  WeightVector weights;
  double starr = 0.0;
  double mean_excess = 0.0;
  double cvar = 0.0;  // return-space
  int iterations = 0;       // Dinkelbach steps
  bool unbounded_ratio = false;  // tail risk vanished at the optimum
};

// Rockafellar-Uryasev CVaR of the loss distribution -returns (positive for
// loss-making tails), evaluated exactly on the discrete scenario set.
double ru_cvar_loss(const Eigen::VectorXd& returns, double confidence);

// Minimum-CVaR portfolio via the LP dual (N+1 rows, S+dim columns) solved by
// the in-repo simplex.
CvarSolution min_cvar_portfolio(const CvarProblem& p,
                                const std::vector<std::string>& tickers = {});

// Maximum-STARR (tangency-CVaR) portfolio: maximize
// (mean(w'r) - rf) / CVaR(w'r) by Dinkelbach iterations over CVaR-style LPs.
StarrSolution max_starr_portfolio(const CvarProblem& p,
                                  const std::vector<std::string>& tickers = {});

}  // namespace pfopt
