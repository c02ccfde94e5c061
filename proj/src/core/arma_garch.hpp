#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/rng.hpp"

namespace pfopt {

// ARMA(1,1)-GARCH(1,1) with standardized Student-t innovations:
//   r_t = delta0 + ar1 r_{t-1} + a_t + ma1 a_{t-1}
//   a_t = sigma_t eps_t,   sigma_t^2 = alpha0 + alpha1 a_{t-1}^2 + beta1 sigma_{t-1}^2
//   eps_t ~ t_nu / sqrt(nu / (nu - 2))   (unit variance)
struct AgParams {
  double delta0 = 0.0;
  double ar1 = 0.0;
  double ma1 = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double nu = 8.0;
  double loglik = 0.0;
};

struct AgFlags {
  bool converged = true;
  bool boundary_persistence = false;  // alpha1 + beta1 > 0.999
  bool boundary_nu = false;           // nu at the top of the search range
};

struct AgFitState {
  AgParams params;
  std::vector<double> std_residuals;  // eps_hat_t = a_hat_t / sigma_hat_t, length T
  double sigma_forecast = 0.0;        // one-step-ahead sigma
  double mean_forecast = 0.0;         // one-step-ahead conditional mean
  AgFlags flags;
};

struct AgFitOptions {
  int starts = 8;              // jittered optimizer starts
  std::uint64_t seed = 1;      // jitter stream
  const AgParams* warm = nullptr;  // previous window's fit, if any
  int warm_starts = 3;         // starts used when warm is present
};

// Conditional log-likelihood with a_0 = 0 and sigma_0^2 = sample variance;
// the first observation conditions the recursion and does not contribute.
double ag_loglik(std::span<const double> returns, const AgParams& p);

// Runs the filter; a and sigma2 come back with length T (a[0] = 0).
void ag_filter(std::span<const double> returns, const AgParams& p, std::vector<double>& a,
               std::vector<double>& sigma2);

// Maximum likelihood via Nelder-Mead on an unconstrained reparametrization,
// best of several jittered starts. Needs >= 500 observations.
AgFitState fit_ag(std::span<const double> returns, const AgFitOptions& options = {});

// Simulates a stationary path (burn-in discarded); test and data-generation
// helper for the same model the fitter assumes.
std::vector<double> simulate_ag_path(const AgParams& p, int n, CounterRng& rng, int burn_in = 500);

}  // namespace pfopt
