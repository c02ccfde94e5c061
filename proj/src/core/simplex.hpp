#pragma once

#include <Eigen/Dense>

namespace pfopt {

// Linear program in computational standard form:
//   min c'x   s.t.  A x = b,   lo <= x <= up
// with +-infinity bounds allowed.
struct Lp {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::VectorXd lo;
  Eigen::VectorXd up;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // simplex multipliers (row duals), y = B^-T c_B
  double objective = 0.0;
  int iterations = 0;
  double complementarity = 0.0;  // max reduced-cost sign violation at the end
};

// Two-phase bounded-variable revised simplex with a dense explicit basis
// inverse. Pricing is Dantzig with a Bland's-rule fallback after a run of
// degenerate pivots, which suppresses cycling. Designed for LPs with few
// rows and many columns (the CVaR duals built in cvar.cpp).
LpResult solve_lp(const Lp& lp, int max_iter = 50000, double tol = 1e-9);

}  // namespace pfopt
