#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/arma_garch.hpp"
#include "core/market_data.hpp"
#include "core/portfolio.hpp"
#include "core/risk_metrics.hpp"

namespace pfopt {

enum class BacktestMode { historical, dynamic };

struct BacktestConfig {
  int window_length = 1008;  // trading days per rolling window
  std::vector<StrategySpec> strategies;
  BacktestMode mode = BacktestMode::historical;
  int scenario_count = 10000;
  std::uint64_t seed = 42;
  double initial_investment = 100.0;
  double box_bound = 1.0;    // optimizer box |w_i| <= box_bound (long-short)
  double gross_bound = 2.0;  // validation bound on released weights
  int copula_refit_days = 1;
  int ag_starts = 8;       // cold-start count for the first window
  int ag_warm_starts = 3;  // starts when warm-started from the previous day
  int threads = 1;
};

struct BacktestResult {
  StrategySpec strategy;
  std::string label;
  std::vector<Date> dates;               // out-of-sample dates
  std::vector<Eigen::VectorXd> weights;  // weights applied on each date
  std::vector<double> returns;
  std::vector<double> prices;  // compounded from initial_investment
  int warnings = 0;            // solver failures resolved by carrying weights
};

struct AgAuditRow {
  Date window_end;
  std::string ticker;
  AgParams params;
};

struct BacktestOutput {
  std::vector<BacktestResult> results;  // same order as config.strategies
  std::vector<AgAuditRow> ag_audit;     // dynamic mode only
  int total_warnings = 0;
};

// Rolling-window daily-rebalanced backtest. Day t's weights use only rows
// [t - window, t - 1] (and the day t-1 risk-free observation); every
// strategy shares one date axis. Per-day solver failures fall back to the
// previous day's weights and are counted as warnings.
BacktestOutput run_backtest(const ReturnPanel& panel, const RiskFreeSeries& aligned_rf,
                            const BacktestConfig& config);

struct ComparisonRow {
  std::string label;
  RatioReport report;
  double terminal_price = 0.0;
};

// Per-strategy ratio suite against a shared benchmark result (EWP in the
// batch pipeline), aligned on the benchmark's date axis.
std::vector<ComparisonRow> compare_to_benchmark(const std::vector<BacktestResult>& results,
                                                const BacktestResult& benchmark,
                                                const std::vector<double>& rf_oos);

}  // namespace pfopt
