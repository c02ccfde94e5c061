#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/arma_garch.hpp"
#include "core/copula.hpp"
#include "core/dates.hpp"

namespace pfopt {

struct ScenarioSet {
  Eigen::MatrixXd draws;  // S x N simulated next-day returns
  Date window_end = 0;
  std::uint64_t seed = 0;
};

// Draws joint copula samples, maps them through each asset's inverse-t
// marginal and re-applies the fitted conditional mean/volatility forecasts.
// Scenario s consumes its own RNG stream, so results are independent of
// evaluation order (and safe to produce in parallel blocks).
ScenarioSet simulate_scenarios(const TCopula& copula, const std::vector<AgFitState>& states,
                               int count, std::uint64_t seed, Date window_end = 0,
                               int threads = 1);

}  // namespace pfopt
