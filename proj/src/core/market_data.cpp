#include "core/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace pfopt {

namespace {

struct ParsedRow {
  int line;
  Date date;
  double value;
};

std::vector<ParsedRow> load_two_column_csv(const std::string& path,
                                           const std::string& expected_header) {
  const auto rows = csv::read_file(path);
  require(!rows.empty(), Errc::malformed_row, path + ": empty file");
  {
    const auto& h = rows.front();
    std::string joined;
    for (std::size_t i = 0; i < h.fields.size(); ++i) {
      if (i) joined += ',';
      joined += h.fields[i];
    }
    require(joined == expected_header, Errc::malformed_row,
            path + " line " + std::to_string(h.line_number) + ": expected header '" +
                expected_header + "', got '" + joined + "'");
  }
  std::vector<ParsedRow> out;
  out.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = path + " line " + std::to_string(row.line_number);
    require(row.fields.size() == 2, Errc::malformed_row, where + ": expected 2 fields");
    const auto date = parse_date(row.fields[0]);
    require(date.has_value(), Errc::malformed_row, where + ": bad date '" + row.fields[0] + "'");
    const auto value = csv::parse_number(row.fields[1]);
    require(value.has_value(), Errc::malformed_row, where + ": bad number '" + row.fields[1] + "'");
    out.push_back({row.line_number, *date, *value});
  }
  return out;
}

}  // namespace

PriceSeries load_price_csv(const std::string& path, const std::string& ticker) {
  auto rows = load_two_column_csv(path, "date,close");
  for (const auto& r : rows) {
    require(r.value > 0.0, Errc::non_positive_price,
            path + " line " + std::to_string(r.line) + ": non-positive price");
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ParsedRow& a, const ParsedRow& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    require(rows[i].date != rows[i - 1].date, Errc::duplicate_date,
            path + " line " + std::to_string(rows[i].line) + ": duplicate date " +
                format_date(rows[i].date));
  }
  PriceSeries s;
  s.ticker = ticker;
  s.dates.reserve(rows.size());
  s.prices.reserve(rows.size());
  for (const auto& r : rows) {
    s.dates.push_back(r.date);
    s.prices.push_back(r.value);
  }
  return s;
}

RiskFreeSeries load_riskfree_csv(const std::string& path) {
  auto rows = load_two_column_csv(path, "date,annual_rate_percent");
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ParsedRow& a, const ParsedRow& b) { return a.date < b.date; });
  RiskFreeSeries rf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      require(rows[i].date != rows[i - 1].date, Errc::duplicate_date,
              path + " line " + std::to_string(rows[i].line) + ": duplicate date");
    }
    rf.dates.push_back(rows[i].date);
    rf.daily_rate.push_back(rows[i].value / (100.0 * 252.0));
  }
  return rf;
}

ReturnPanel compute_returns(const std::vector<PriceSeries>& series, ReturnKind kind) {
  require(!series.empty(), Errc::zero_assets, "compute_returns with no series");

  // Inner-join calendar.
  std::vector<Date> shared = series.front().dates;
  for (std::size_t i = 1; i < series.size(); ++i) {
    std::vector<Date> next;
    std::set_intersection(shared.begin(), shared.end(), series[i].dates.begin(),
                          series[i].dates.end(), std::back_inserter(next));
    shared = std::move(next);
  }
  require(shared.size() >= 2, Errc::empty_intersection,
          "fewer than 2 shared dates across series");

  const auto n = static_cast<Eigen::Index>(series.size());
  const auto t_count = static_cast<Eigen::Index>(shared.size() - 1);

  ReturnPanel panel;
  panel.kind = kind;
  panel.dates.assign(shared.begin() + 1, shared.end());
  panel.returns.resize(t_count, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& s = series[static_cast<std::size_t>(j)];
    panel.tickers.push_back(s.ticker.empty() ? "A" + std::to_string(j + 1) : s.ticker);
    // Walk the shared calendar through this series' sorted dates.
    std::size_t pos = 0;
    double prev_price = 0.0;
    for (std::size_t k = 0; k < shared.size(); ++k) {
      while (s.dates[pos] != shared[k]) ++pos;
      const double price = s.prices[pos];
      if (k > 0) {
        const double gross = price / prev_price;
        panel.returns(static_cast<Eigen::Index>(k - 1), j) =
            kind == ReturnKind::simple ? gross - 1.0 : std::log(gross);
      }
      prev_price = price;
    }
  }
  return panel;
}

RiskFreeSeries align_riskfree(const ReturnPanel& panel, const RiskFreeSeries& rf) {
  require(!rf.dates.empty(), Errc::no_coverage, "risk-free series is empty");
  require(rf.dates.front() <= panel.dates.front(), Errc::no_coverage,
          "risk-free series starts " + format_date(rf.dates.front()) + ", after panel start " +
              format_date(panel.dates.front()));
  RiskFreeSeries out;
  out.dates = panel.dates;
  out.daily_rate.reserve(panel.dates.size());
  std::size_t pos = 0;
  for (const Date d : panel.dates) {
    while (pos + 1 < rf.dates.size() && rf.dates[pos + 1] <= d) ++pos;
    out.daily_rate.push_back(rf.daily_rate[pos]);
  }
  return out;
}

std::vector<double> cumulative_price(const ReturnPanel& panel,
                                     const std::vector<WeightVector>& weights_by_day,
                                     double initial) {
  require(initial > 0.0, Errc::invalid_argument, "initial investment must be positive");
  const auto t_count = panel.returns.rows();
  require(static_cast<Eigen::Index>(weights_by_day.size()) == t_count, Errc::length_mismatch,
          "weights_by_day length != panel length");
  std::vector<double> out(static_cast<std::size_t>(t_count));
  double value = initial;
  for (Eigen::Index t = 0; t < t_count; ++t) {
    const auto& w = weights_by_day[static_cast<std::size_t>(t)];
    require(w.weights.size() == panel.returns.cols(), Errc::length_mismatch,
            "weight dimension != panel width");
    double day_return = 0.0;
    for (Eigen::Index j = 0; j < panel.returns.cols(); ++j) {
      const double r = panel.kind == ReturnKind::simple ? panel.returns(t, j)
                                                        : std::expm1(panel.returns(t, j));
      day_return += w.weights[j] * r;
    }
    value *= 1.0 + day_return;
    out[static_cast<std::size_t>(t)] = value;
  }
  return out;
}

ReturnPanel to_simple(const ReturnPanel& panel) {
  if (panel.kind == ReturnKind::simple) return panel;
  ReturnPanel out = panel;
  out.kind = ReturnKind::simple;
  out.returns = panel.returns.unaryExpr([](double r) { return std::expm1(r); });
  return out;
}

void write_panel_csv(const ReturnPanel& panel, const std::string& path) {
  std::ostringstream out;
  out << "date";
  for (const auto& t : panel.tickers) out << ',' << t;
  out << '\n';
  for (Eigen::Index t = 0; t < panel.returns.rows(); ++t) {
    out << format_date(panel.dates[static_cast<std::size_t>(t)]);
    for (Eigen::Index j = 0; j < panel.returns.cols(); ++j) {
      out << ',' << csv::format_full(panel.returns(t, j));
    }
    out << '\n';
  }
  csv::write_file(path, out.str());
}

ReturnPanel read_panel_csv(const std::string& path, ReturnKind kind) {
  const auto rows = csv::read_file(path);
  require(rows.size() >= 2, Errc::malformed_row, path + ": panel needs a header and data");
  const auto& header = rows.front();
  require(header.fields.size() >= 2 && header.fields[0] == "date", Errc::malformed_row,
          path + ": bad panel header");
  ReturnPanel panel;
  panel.kind = kind;
  panel.tickers.assign(header.fields.begin() + 1, header.fields.end());
  const auto n = static_cast<Eigen::Index>(panel.tickers.size());
  const auto t_count = static_cast<Eigen::Index>(rows.size() - 1);
  panel.returns.resize(t_count, n);
  panel.dates.reserve(static_cast<std::size_t>(t_count));
  for (Eigen::Index t = 0; t < t_count; ++t) {
    const auto& row = rows[static_cast<std::size_t>(t) + 1];
    const std::string where = path + " line " + std::to_string(row.line_number);
    require(row.fields.size() == static_cast<std::size_t>(n) + 1, Errc::malformed_row,
            where + ": wrong field count");
    const auto date = parse_date(row.fields[0]);
    require(date.has_value(), Errc::malformed_row, where + ": bad date");
    panel.dates.push_back(*date);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto v = csv::parse_number(row.fields[static_cast<std::size_t>(j) + 1]);
      require(v.has_value(), Errc::malformed_row, where + ": bad number");
      panel.returns(t, j) = *v;
    }
  }
  return panel;
}

ReturnPanel slice_panel(const ReturnPanel& panel, Date start, Date end) {
  std::vector<Eigen::Index> keep;
  for (std::size_t t = 0; t < panel.dates.size(); ++t) {
    if (start >= 0 && panel.dates[t] < start) continue;
    if (end >= 0 && panel.dates[t] > end) continue;
    keep.push_back(static_cast<Eigen::Index>(t));
  }
  require(!keep.empty(), Errc::empty_intersection, "date filter removed every row");
  ReturnPanel out;
  out.kind = panel.kind;
  out.tickers = panel.tickers;
  out.returns.resize(static_cast<Eigen::Index>(keep.size()), panel.returns.cols());
  out.dates.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.dates.push_back(panel.dates[static_cast<std::size_t>(keep[i])]);
    out.returns.row(static_cast<Eigen::Index>(i)) = panel.returns.row(keep[i]);
  }
  return out;
}

}  // namespace pfopt
