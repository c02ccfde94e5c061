#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/dates.hpp"
#include "core/portfolio.hpp"

namespace pfopt {

struct PriceSeries {
  std::string ticker;
  std::vector<Date> dates;     // strictly increasing
  std::vector<double> prices;  // all > 0
};

enum class ReturnKind { simple, log_return };

// Aligned T x N daily return matrix on the inner-join calendar of all input
// series. dates[t] is the date the t-th return realizes on.
struct ReturnPanel {
  std::vector<Date> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd returns;  // T x N
  ReturnKind kind = ReturnKind::simple;
};

struct RiskFreeSeries {
  std::vector<Date> dates;
  std::vector<double> daily_rate;  // per-day decimal
};

// CSV with header "date,close", ISO-8601 dates. Rows may arrive unsorted;
// output is sorted ascending. Errors name the offending 1-based line.
PriceSeries load_price_csv(const std::string& path, const std::string& ticker = "");

// CSV with header "date,annual_rate_percent"; rates convert to per-day
// decimals as pct / (100 * 252).
RiskFreeSeries load_riskfree_csv(const std::string& path);

ReturnPanel compute_returns(const std::vector<PriceSeries>& series, ReturnKind kind);

// One daily rate per panel date, forward-filled from the last observation at
// or before each date.
RiskFreeSeries align_riskfree(const ReturnPanel& panel, const RiskFreeSeries& rf);

// V(0) = initial, V(t) = V(t-1) * (1 + w_t . r_t); log panels are converted
// to simple returns first. Returns V(1..T).
std::vector<double> cumulative_price(const ReturnPanel& panel,
                                     const std::vector<WeightVector>& weights_by_day,
                                     double initial);

// Simple-return view of a panel (identity for kind == simple).
ReturnPanel to_simple(const ReturnPanel& panel);

void write_panel_csv(const ReturnPanel& panel, const std::string& path);
ReturnPanel read_panel_csv(const std::string& path, ReturnKind kind);

// Restrict a panel to dates in [start, end] (inclusive); pass a negative
// bound to leave that side open.
ReturnPanel slice_panel(const ReturnPanel& panel, Date start, Date end);

}  // namespace pfopt
