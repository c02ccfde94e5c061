#include "core/portfolio.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace pfopt {

void validate_weights(const WeightVector& w, const WeightBounds& bounds) {
  require(w.weights.size() == static_cast<Eigen::Index>(w.tickers.size()),
          Errc::dimension_mismatch, "weight/ticker length mismatch");
  const double sum = w.weights.sum();
  require(std::abs(sum - 1.0) <= bounds.sum_tol, Errc::invalid_argument,
          "weights sum to " + std::to_string(sum) + ", expected 1");
  for (Eigen::Index i = 0; i < w.weights.size(); ++i) {
    const double wi = w.weights[i];
    require(std::isfinite(wi), Errc::invalid_argument, "non-finite weight");
    if (w.regime == Regime::long_only) {
      require(wi >= -bounds.long_only_tol, Errc::invalid_argument,
              "negative weight " + std::to_string(wi) + " under long-only");
    } else {
      require(std::abs(wi) <= bounds.gross_bound, Errc::invalid_argument,
              "weight " + std::to_string(wi) + " exceeds long-short bound " +
                  std::to_string(bounds.gross_bound));
    }
  }
}

WeightVector equal_weights(const std::vector<std::string>& tickers) {
  require(!tickers.empty(), Errc::zero_assets, "equal weights over zero assets");
  WeightVector w;
  w.tickers = tickers;
  w.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(tickers.size()),
                                        1.0 / static_cast<double>(tickers.size()));
  w.regime = Regime::long_only;
  return w;
}

WeightVector equal_weights(int n) {
  require(n >= 1, Errc::zero_assets, "equal weights over zero assets");
  std::vector<std::string> tickers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) tickers[static_cast<std::size_t>(i)] = "A" + std::to_string(i + 1);
  return equal_weights(tickers);
}

double portfolio_return(const WeightVector& w, const Eigen::VectorXd& asset_returns) {
  require(w.weights.size() == asset_returns.size(), Errc::dimension_mismatch,
          "portfolio_return dimension mismatch");
  return w.weights.dot(asset_returns);
}

StrategySpec make_strategy(Family family, Regime regime, double confidence) {
  const bool needs_conf = family == Family::cvar_min || family == Family::cvar_tangent;
  require(needs_conf == (confidence > 0.0), Errc::invalid_argument,
          "confidence must be present exactly for the CVaR families");
  if (needs_conf) {
    require(confidence > 0.0 && confidence < 1.0, Errc::invalid_argument,
            "confidence outside (0,1)");
  }
  return StrategySpec{family, confidence, regime};
}

std::string strategy_label(const StrategySpec& spec) {
  if (spec.family == Family::ewp) return "EWP";
  const std::string prefix = spec.regime == Regime::long_only ? "LO_" : "LS_";
  const auto conf_suffix = [&] {
    return std::to_string(static_cast<int>(std::lround(spec.confidence * 100)));
  };
  switch (spec.family) {
    case Family::mvp:
      return prefix + "MVP";
    case Family::tvp:
      return prefix + "TVP";
    case Family::cvar_min:
      return prefix + "C" + conf_suffix();
    case Family::cvar_tangent:
      return prefix + "TC" + conf_suffix();
    default:
      return "EWP";
  }
}

StrategySpec parse_strategy(const std::string& family_token, Regime regime) {
  if (family_token == "EWP") return make_strategy(Family::ewp, Regime::long_only);
  if (family_token == "MVP") return make_strategy(Family::mvp, regime);
  if (family_token == "TVP") return make_strategy(Family::tvp, regime);
  if (family_token == "C95") return make_strategy(Family::cvar_min, regime, 0.95);
  if (family_token == "C99") return make_strategy(Family::cvar_min, regime, 0.99);
  if (family_token == "TC95") return make_strategy(Family::cvar_tangent, regime, 0.95);
  if (family_token == "TC99") return make_strategy(Family::cvar_tangent, regime, 0.99);
  raise(Errc::config_error, "unknown strategy token: " + family_token);
}

}  // namespace pfopt
