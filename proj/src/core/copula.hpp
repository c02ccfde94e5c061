#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/arma_garch.hpp"

namespace pfopt {

struct TCopula {
  Eigen::MatrixXd correlation;  // N x N positive definite, unit diagonal
  double df = 10.0;
  double loglik = 0.0;
};

// Probability-integral transform of the fitted standardized residuals:
// u_t = F_nu(eps_hat_t * sqrt(nu/(nu-2))), clamped to [1e-10, 1-1e-10].
std::vector<double> copula_transform(const AgFitState& state);

// Clamps off-diagonals to +-(1 - 1e-8), then eigenvalue-clips and rescales
// until the matrix factorizes. Raises Errc::non_pd_projection on failure.
Eigen::MatrixXd nearest_correlation(Eigen::MatrixXd m);

// Student-t copula fit: correlation from pairwise Kendall tau through
// rho = sin(pi tau / 2); degrees of freedom by profile likelihood over
// [2.1, 50] (grid plus golden-section refinement).
TCopula fit_copula(const Eigen::MatrixXd& uniforms);

}  // namespace pfopt
