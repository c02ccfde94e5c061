#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/market_data.hpp"

using namespace pfopt;

namespace {

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << contents;
  return path;
}

PriceSeries series_from(const std::string& ticker, const std::vector<std::string>& dates,
                        const std::vector<double>& prices) {
  PriceSeries s;
  s.ticker = ticker;
  for (const auto& d : dates) s.dates.push_back(*parse_date(d));
  s.prices = prices;
  return s;
}

}  // namespace

TEST_CASE("load_price_csv reads an in-order file verbatim") {
  const auto path = temp_file("px_basic.csv",
                              "date,close\n2020-01-02,100\n2020-01-03,101\n2020-01-06,102\n");
  const auto s = load_price_csv(path, "AAA");
  REQUIRE(s.prices.size() == 3);
  CHECK(s.prices == std::vector<double>{100.0, 101.0, 102.0});
  CHECK(format_date(s.dates.front()) == "2020-01-02");
}

TEST_CASE("load_price_csv rejects a non-positive price naming the line") {
  const auto path = temp_file(
      "px_zero.csv", "date,close\n2020-01-02,100\n2020-01-03,101\n2020-01-06,0\n");
  try {
    load_price_csv(path);
    FAIL("expected non_positive_price");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_positive_price);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("load_price_csv sorts unsorted rows (scripted-sort oracle)") {
  const std::vector<std::pair<std::string, double>> rows = {
      {"2020-01-08", 104}, {"2020-01-02", 100}, {"2020-01-06", 102}, {"2020-01-03", 101}};
  std::string text = "date,close\n";
  for (const auto& [d, p] : rows) text += d + "," + std::to_string(p) + "\n";
  const auto s = load_price_csv(temp_file("px_unsorted.csv", text));

  auto sorted_rows = rows;
  std::sort(sorted_rows.begin(), sorted_rows.end());
  REQUIRE(s.dates.size() == sorted_rows.size());
  for (std::size_t i = 0; i < sorted_rows.size(); ++i) {
    CHECK(format_date(s.dates[i]) == sorted_rows[i].first);
    CHECK(s.prices[i] == doctest::Approx(sorted_rows[i].second));
  }
}

TEST_CASE("load_price_csv flags duplicates and malformed rows") {
  const auto dup = temp_file("px_dup.csv", "date,close\n2020-01-02,100\n2020-01-02,101\n");
  CHECK_THROWS_WITH_AS(load_price_csv(dup), doctest::Contains("duplicate date"), Error);
  const auto bad = temp_file("px_bad.csv", "date,close\n2020-01-02,abc\n");
  try {
    load_price_csv(bad);
    FAIL("expected malformed_row");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_row);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("compute_returns basics") {
  const auto a = series_from("A", {"2020-01-02", "2020-01-03"}, {100, 110});
  const auto panel = compute_returns({a}, ReturnKind::simple);
  REQUIRE(panel.returns.rows() == 1);
  CHECK(panel.returns(0, 0) == doctest::Approx(0.10).epsilon(1e-14));

  const auto c = series_from("C", {"2020-01-02", "2020-01-03", "2020-01-06"}, {100, 100, 100});
  const auto flat = compute_returns({c}, ReturnKind::simple);
  CHECK(flat.returns(0, 0) == 0.0);
  CHECK(flat.returns(1, 0) == 0.0);
}

TEST_CASE("compute_returns intersects calendars (hand enumeration)") {
  // Calendars {d1..d5} and {d2..d6}: shared {d2..d5}, T = 3.
  const std::vector<std::string> d{"2020-01-01", "2020-01-02", "2020-01-03",
                                   "2020-01-04", "2020-01-05", "2020-01-06"};
  const auto a = series_from("A", {d[0], d[1], d[2], d[3], d[4]}, {10, 11, 12, 13, 14});
  const auto b = series_from("B", {d[1], d[2], d[3], d[4], d[5]}, {20, 21, 22, 23, 24});
  const auto panel = compute_returns({a, b}, ReturnKind::simple);
  REQUIRE(panel.returns.rows() == 3);
  CHECK(format_date(panel.dates.front()) == d[2]);
  CHECK(format_date(panel.dates.back()) == d[4]);
  CHECK(panel.returns(0, 0) == doctest::Approx(12.0 / 11.0 - 1.0));
  CHECK(panel.returns(0, 1) == doctest::Approx(21.0 / 20.0 - 1.0));

  const auto disjoint = series_from("Z", {"2021-05-05", "2021-05-06"}, {1, 2});
  CHECK_THROWS_AS((void)compute_returns({a, disjoint}, ReturnKind::simple), Error);
}

TEST_CASE("panel is insensitive to input series order") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 0.01);
  std::vector<std::string> dates;
  for (int i = 0; i < 40; ++i) dates.push_back(format_date(18000 + 2 * i));
  std::vector<PriceSeries> series;
  for (int j = 0; j < 4; ++j) {
    std::vector<double> prices{50.0 + 10 * j};
    for (int i = 1; i < 40; ++i) prices.push_back(prices.back() * (1.0 + normal(rng)));
    series.push_back(series_from("S" + std::to_string(j), dates, prices));
  }
  const auto p1 = compute_returns(series, ReturnKind::simple);
  std::reverse(series.begin(), series.end());
  const auto p2 = compute_returns(series, ReturnKind::simple);
  CHECK(p1.dates == p2.dates);
  for (std::size_t j = 0; j < p1.tickers.size(); ++j) {
    const auto it = std::find(p2.tickers.begin(), p2.tickers.end(), p1.tickers[j]);
    REQUIRE(it != p2.tickers.end());
    const auto j2 = static_cast<Eigen::Index>(it - p2.tickers.begin());
    CHECK((p1.returns.col(static_cast<Eigen::Index>(j)) - p2.returns.col(j2)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("log and simple returns agree to first order") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-0.4, 0.45);
  std::vector<std::string> dates;
  for (int i = 0; i < 200; ++i) dates.push_back(format_date(18200 + i));
  std::vector<double> prices{100.0};
  std::vector<double> simple_oracle;
  for (int i = 1; i < 200; ++i) {
    const double r = unif(rng);
    simple_oracle.push_back(r);
    prices.push_back(prices.back() * (1.0 + r));
  }
  const auto s = series_from("A", dates, prices);
  const auto log_panel = compute_returns({s}, ReturnKind::log_return);
  const auto simple_panel = compute_returns({s}, ReturnKind::simple);
  for (Eigen::Index t = 0; t < log_panel.returns.rows(); ++t) {
    const double lr = log_panel.returns(t, 0);
    const double sr = simple_panel.returns(t, 0);
    CHECK(std::abs(lr - sr) <= sr * sr + 1e-12);
  }
}

TEST_CASE("cumulative_price hand cases") {
  ReturnPanel panel;
  panel.kind = ReturnKind::simple;
  panel.tickers = {"A"};
  panel.dates = {1, 2};
  panel.returns.resize(2, 1);
  panel.returns << 0.10, -0.10;
  const std::vector<WeightVector> w(2, equal_weights(std::vector<std::string>{"A"}));
  const auto v = cumulative_price(panel, w, 100.0);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(110.0));
  CHECK(v[1] == doctest::Approx(99.0));

  ReturnPanel two;
  two.kind = ReturnKind::simple;
  two.tickers = {"A", "B"};
  two.dates = {1};
  two.returns.resize(1, 2);
  two.returns << 0.02, -0.02;
  const std::vector<WeightVector> w2(1, equal_weights(two.tickers));
  CHECK(cumulative_price(two, w2, 100.0)[0] == doctest::Approx(100.0));

  CHECK_THROWS_AS((void)cumulative_price(two, w, 100.0), Error);  // length mismatch
}

TEST_CASE("round trip: returns then cumulative price reproduces the path") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal(0.0003, 0.012);
  std::vector<std::string> dates;
  std::vector<double> prices{73.0};
  dates.push_back(format_date(18300));
  for (int i = 1; i < 300; ++i) {
    dates.push_back(format_date(18300 + i));
    prices.push_back(prices.back() * (1.0 + normal(rng)));
  }
  const auto s = series_from("A", dates, prices);
  for (const auto kind : {ReturnKind::simple, ReturnKind::log_return}) {
    const auto panel = compute_returns({s}, kind);
    const std::vector<WeightVector> w(prices.size() - 1,
                                      equal_weights(std::vector<std::string>{"A"}));
    const double initial = 100.0;
    const auto path = cumulative_price(panel, w, initial);
    for (std::size_t t = 0; t < path.size(); ++t) {
      const double expected = prices[t + 1] / prices[0] * initial;
      CHECK(std::abs(path[t] - expected) <= 1e-10 * expected);
    }
  }
}

TEST_CASE("align_riskfree forward-fills and converts units") {
  ReturnPanel panel;
  panel.dates = {100, 101, 102};
  RiskFreeSeries rf;
  rf.dates = {99, 100, 102};
  rf.daily_rate = {0.1, 0.2, 0.3};
  const auto aligned = align_riskfree(panel, rf);
  CHECK(aligned.daily_rate == std::vector<double>{0.2, 0.2, 0.3});

  RiskFreeSeries late;
  late.dates = {101};
  late.daily_rate = {0.1};
  CHECK_THROWS_AS((void)align_riskfree(panel, late), Error);

  // Annualized 5.04% -> daily decimal 0.0002 through the loader.
  const auto path = (std::filesystem::temp_directory_path() / "rf_unit.csv").string();
  std::ofstream(path) << "date,annual_rate_percent\n2020-01-02,5.04\n";
  const auto loaded = load_riskfree_csv(path);
  CHECK(loaded.daily_rate[0] == doctest::Approx(0.0002).epsilon(1e-12));
}

TEST_CASE("panel CSV writer round-trips and is deterministic") {
  ReturnPanel panel;
  panel.kind = ReturnKind::simple;
  panel.tickers = {"A", "B"};
  panel.dates = {18300, 18301};
  panel.returns.resize(2, 2);
  panel.returns << 0.0123456789012345, -0.5e-5, 1e-9, 0.25;
  const auto path = (std::filesystem::temp_directory_path() / "panel_rt.csv").string();
  write_panel_csv(panel, path);
  const auto back = read_panel_csv(path, ReturnKind::simple);
  CHECK((back.returns - panel.returns).cwiseAbs().maxCoeff() == 0.0);
  write_panel_csv(back, path + ".2");
  std::ifstream f1(path), f2(path + ".2");
  const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
}
