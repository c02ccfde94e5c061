#pragma once

#include <Eigen/Dense>

namespace pfopt {

struct QpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd eq_multipliers;
  int iterations = 0;
  double kkt_residual = 0.0;
};

// Primal active-set method for the convex QP
//   min 1/2 x'Qx + d'x   s.t.  A x = b  (1 or 2 rows),  x >= 0,
// started from a feasible x0. Q must be positive definite (callers jitter
// their covariances first). Converges when the KKT residual drops below
// `tol`; raises Errc::solver_failure after max_iter working-set changes.
QpResult solve_qp_nonneg(const Eigen::MatrixXd& Q, const Eigen::VectorXd& d,
                         const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x0, int max_iter = 500, double tol = 1e-10);

}  // namespace pfopt
