#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pfopt {

enum class Regime { long_only, long_short };

// Weight bounds applied when a WeightVector is validated. The long-short
// element bound is configurable (gross_bound); optimizer feasible sets use
// the tighter box in BoxBounds.
struct WeightBounds {
  double gross_bound = 2.0;    // |w_i| <= gross_bound under long_short
  double sum_tol = 1e-8;       // |sum(w) - 1| tolerance
  double long_only_tol = 1e-10;
};

struct WeightVector {
  std::vector<std::string> tickers;
  Eigen::VectorXd weights;
  Regime regime = Regime::long_only;
};

void validate_weights(const WeightVector& w, const WeightBounds& bounds = {});

WeightVector equal_weights(const std::vector<std::string>& tickers);
WeightVector equal_weights(int n);  // anonymous tickers "A1".."An"

double portfolio_return(const WeightVector& w, const Eigen::VectorXd& asset_returns);

enum class Family { ewp, mvp, tvp, cvar_min, cvar_tangent };

struct StrategySpec {
  Family family = Family::ewp;
  double confidence = 0.0;  // only meaningful for the CVaR families
  Regime regime = Regime::long_only;
};

StrategySpec make_strategy(Family family, Regime regime, double confidence = 0.0);

// "EWP", "LS_TVP", "LO_C95", "LS_TC99", ...
std::string strategy_label(const StrategySpec& spec);
// Parses a family token ("EWP", "MVP", "TVP", "C95", "C99", "TC95", "TC99").
StrategySpec parse_strategy(const std::string& family_token, Regime regime);

}  // namespace pfopt
