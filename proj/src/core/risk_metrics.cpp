#include "core/risk_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/stats.hpp"

namespace pfopt {

namespace {

std::vector<double> excess_series(std::span<const double> returns, std::span<const double> rf) {
  require(returns.size() == rf.size(), Errc::length_mismatch,
          "returns and risk-free series are not aligned");
  std::vector<double> out(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) out[i] = returns[i] - rf[i];
  return out;
}

}  // namespace

double sharpe(std::span<const double> returns, std::span<const double> rf) {
  require(returns.size() >= 2, Errc::too_few_observations, "sharpe needs >= 2 observations");
  const auto excess = excess_series(returns, rf);
  const double sd = stats::stdev(excess);
  require(sd > 0.0, Errc::zero_volatility, "zero volatility of excess returns");
  return stats::mean(excess) / sd;
}

double max_drawdown(std::span<const double> prices) {
  require(!prices.empty(), Errc::empty_series, "max_drawdown of empty series");
  double peak = -std::numeric_limits<double>::infinity();
  double mdd = 0.0;
  for (double p : prices) {
    peak = std::max(peak, p);
    mdd = std::max(mdd, (peak - p) / peak);
  }
  return mdd;
}

double calmar(std::span<const double> prices) {
  require(prices.size() >= 253, Errc::too_few_observations,
          "calmar needs at least one 252-day year of prices");
  const double elapsed_years = static_cast<double>(prices.size() - 1) / 252.0;
  const double cagr = std::pow(prices.back() / prices.front(), 1.0 / elapsed_years) - 1.0;
  const double mdd = max_drawdown(prices);
  require(mdd > 0.0, Errc::zero_drawdown, "calmar undefined with zero drawdown");
  return cagr / mdd;
}

double var(std::span<const double> returns, double confidence) {
  require(confidence > 0.0 && confidence < 1.0, Errc::invalid_argument,
          "confidence outside (0,1)");
  const auto needed = static_cast<std::size_t>(std::ceil(1.0 / (1.0 - confidence)));
  require(returns.size() >= needed, Errc::too_few_observations,
          "VaR needs >= " + std::to_string(needed) + " observations");
  return stats::quantile_hf7(returns, 1.0 - confidence);
}

double cvar(std::span<const double> returns, double confidence) {
  const double threshold = var(returns, confidence);
  double sum = 0.0;
  std::size_t count = 0;
  for (double r : returns) {
    if (r <= threshold) {
      sum += r;
      ++count;
    }
  }
  require(count > 0, Errc::empty_tail, "no observations at or below the VaR threshold");
  return sum / static_cast<double>(count);
}

double starr(std::span<const double> returns, std::span<const double> rf, double confidence) {
  const auto excess = excess_series(returns, rf);
  const double tail = cvar(returns, confidence);
  require(tail != 0.0, Errc::zero_tail_risk, "STARR undefined with zero CVaR");
  return stats::mean(excess) / std::abs(tail);
}

double rachev(std::span<const double> returns, double alpha, double beta) {
  std::vector<double> negated(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) negated[i] = -returns[i];
  const double gain_tail = -cvar(negated, alpha);  // expected top-tail gain
  const double loss_tail = std::abs(cvar(returns, beta));
  require(loss_tail > 0.0, Errc::empty_tail, "rachev loss tail has zero magnitude");
  return gain_tail / loss_tail;
}

double sortino(std::span<const double> returns, std::span<const double> rf) {
  const auto excess = excess_series(returns, rf);
  require(!excess.empty(), Errc::empty_series, "sortino of empty series");
  double downside_sq = 0.0;
  bool any_down = false;
  for (double e : excess) {
    if (e < 0.0) {
      any_down = true;
      downside_sq += e * e;
    }
  }
  require(any_down, Errc::no_downside, "no negative excess returns");
  const double dd = std::sqrt(downside_sq / static_cast<double>(excess.size()));
  return stats::mean(excess) / dd;
}

double jensens_alpha(std::span<const double> returns, std::span<const double> benchmark,
                     std::span<const double> rf) {
  require(returns.size() == benchmark.size(), Errc::length_mismatch,
          "returns and benchmark are not aligned");
  require(returns.size() >= 30, Errc::too_few_observations,
          "jensens_alpha needs >= 30 observations");
  const auto y = excess_series(returns, rf);
  const auto x = excess_series(benchmark, rf);
  const double mx = stats::mean(x);
  const double my = stats::mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, Errc::degenerate_benchmark, "benchmark has zero variance");
  const double beta = sxy / sxx;
  return my - beta * mx;
}

std::vector<double> compound_prices(std::span<const double> returns, double initial) {
  std::vector<double> prices(returns.size());
  double v = initial;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    v *= 1.0 + returns[i];
    prices[i] = v;
  }
  return prices;
}

RatioReport build_ratio_report(std::span<const double> returns, std::span<const double> rf,
                               std::span<const double> benchmark, double initial_price) {
  RatioReport rep;
  rep.n_obs = static_cast<std::int64_t>(returns.size());
  const auto prices = compound_prices(returns, initial_price);
  const auto guarded = [](auto&& fn) {
    try {
      return fn();
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  rep.sharpe = guarded([&] { return sharpe(returns, rf); });
  rep.sortino = guarded([&] { return sortino(returns, rf); });
  rep.calmar = guarded([&] { return calmar(prices); });
  rep.starr95 = guarded([&] { return starr(returns, rf, 0.95); });
  rep.rachev = guarded([&] { return rachev(returns); });
  rep.jensens_alpha = guarded([&] { return jensens_alpha(returns, benchmark, rf); });
  rep.max_drawdown = guarded([&] { return max_drawdown(prices); });
  rep.var95 = guarded([&] { return var(returns, 0.95); });
  rep.cvar95 = guarded([&] { return cvar(returns, 0.95); });
  rep.var99 = guarded([&] { return var(returns, 0.99); });
  rep.cvar99 = guarded([&] { return cvar(returns, 0.99); });
  return rep;
}

}  // namespace pfopt
