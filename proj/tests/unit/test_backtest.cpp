#include <doctest.h>

#include <random>

#include "core/backtest.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"

using namespace pfopt;

namespace {

ReturnPanel make_panel(int t_len, int n, std::uint64_t seed, double mean = 0.0004,
                       double vol = 0.01) {
  CounterRng rng(seed, 0);
  ReturnPanel p;
  p.kind = ReturnKind::simple;
  p.returns.resize(t_len, n);
  for (int j = 0; j < n; ++j) p.tickers.push_back("A" + std::to_string(j + 1));
  for (int t = 0; t < t_len; ++t) {
    p.dates.push_back(18000 + t);
    for (int j = 0; j < n; ++j) p.returns(t, j) = mean + vol * rng.next_normal();
  }
  return p;
}

RiskFreeSeries flat_rf(const ReturnPanel& panel, double daily = 0.00005) {
  RiskFreeSeries rf;
  rf.dates = panel.dates;
  rf.daily_rate.assign(panel.dates.size(), daily);
  return rf;
}

BacktestConfig basic_config(std::vector<StrategySpec> specs, int window) {
  BacktestConfig cfg;
  cfg.window_length = window;
  cfg.strategies = std::move(specs);
  cfg.mode = BacktestMode::historical;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("EWP backtest equals definitional daily-1/N compounding") {
  const auto panel = make_panel(160, 3, 1);
  const auto rf = flat_rf(panel);
  const auto out = run_backtest(panel, rf, basic_config({make_strategy(Family::ewp, Regime::long_only)}, 120));
  const auto& res = out.results[0];
  REQUIRE(res.returns.size() == 40);

  ReturnPanel oos;
  oos.kind = ReturnKind::simple;
  oos.tickers = panel.tickers;
  oos.dates.assign(panel.dates.begin() + 120, panel.dates.end());
  oos.returns = panel.returns.bottomRows(40);
  const std::vector<WeightVector> w(40, equal_weights(panel.tickers));
  const auto path = cumulative_price(oos, w, 100.0);
  for (std::size_t t = 0; t < path.size(); ++t) {
    CHECK(std::abs(res.prices[t] - path[t]) <= 1e-10 * path[t]);
  }
}

TEST_CASE("window_length = T-1 leaves exactly one out-of-sample day") {
  const auto panel = make_panel(121, 2, 2);
  const auto out = run_backtest(panel, flat_rf(panel),
                                basic_config({make_strategy(Family::mvp, Regime::long_short)}, 120));
  CHECK(out.results[0].returns.size() == 1);
  CHECK(out.results[0].dates[0] == panel.dates.back());
}

TEST_CASE("iid identical assets keep LS MVP near equal weights") {
  const auto panel = make_panel(200, 4, 3);
  const auto out = run_backtest(panel, flat_rf(panel),
                                basic_config({make_strategy(Family::mvp, Regime::long_short)}, 150));
  for (const auto& w : out.results[0].weights) {
    for (int j = 0; j < 4; ++j) CHECK(std::abs(w[j] - 0.25) < 0.05);
  }
}

TEST_CASE("no look-ahead: perturbing day t leaves weights through t unchanged") {
  const auto panel = make_panel(170, 3, 4);
  const auto rf = flat_rf(panel);
  const auto cfg = basic_config({make_strategy(Family::mvp, Regime::long_only),
                                 make_strategy(Family::cvar_min, Regime::long_short, 0.95)},
                                120);
  const auto base = run_backtest(panel, rf, cfg);

  auto mutated = panel;
  const Eigen::Index t_mut = 150;  // out-of-sample day index
  mutated.returns.row(t_mut).array() += 0.05;
  const auto bumped = run_backtest(mutated, rf, cfg);

  for (std::size_t k = 0; k < base.results.size(); ++k) {
    const auto& r0 = base.results[k];
    const auto& r1 = bumped.results[k];
    for (std::size_t d = 0; d < r0.dates.size(); ++d) {
      const bool before_or_at = panel.dates[static_cast<std::size_t>(t_mut)] >= r0.dates[d];
      if (before_or_at) {
        CHECK((r0.weights[d] - r1.weights[d]).cwiseAbs().maxCoeff() == 0.0);
      }
    }
    // The day after the perturbation the weights must differ somewhere.
    double diff = 0.0;
    for (std::size_t d = 0; d < r0.dates.size(); ++d) {
      diff += (r0.weights[d] - r1.weights[d]).cwiseAbs().maxCoeff();
    }
    CHECK(diff > 0.0);
  }
}

TEST_CASE("same seed reproduces identical results") {
  const auto panel = make_panel(150, 3, 5);
  const auto rf = flat_rf(panel);
  auto cfg = basic_config({make_strategy(Family::cvar_min, Regime::long_only, 0.95),
                           make_strategy(Family::tvp, Regime::long_short)},
                          120);
  const auto a = run_backtest(panel, rf, cfg);
  const auto b = run_backtest(panel, rf, cfg);
  for (std::size_t k = 0; k < a.results.size(); ++k) {
    CHECK(a.results[k].returns == b.results[k].returns);
    CHECK(a.results[k].prices == b.results[k].prices);
  }
}

TEST_CASE("solver failures carry the previous weights and are counted") {
  // Zero-mean assets with rf far above any mean: tangency has no solution.
  const auto panel = make_panel(140, 2, 6, /*mean=*/0.0, /*vol=*/0.005);
  const auto rf = flat_rf(panel, 0.05);
  const auto out = run_backtest(panel, rf, basic_config({make_strategy(Family::tvp, Regime::long_short)}, 120));
  const auto& res = out.results[0];
  CHECK(res.warnings == static_cast<int>(res.dates.size()));
  CHECK(out.total_warnings == res.warnings);
  for (const auto& w : res.weights) {
    CHECK(w[0] == doctest::Approx(0.5));  // the equal-weight fallback
  }
  CHECK(res.prices.size() == res.dates.size());
}

TEST_CASE("dynamic and historical MVP agree on iid Gaussian data") {
  const auto panel = make_panel(525, 3, 8);
  const auto rf = flat_rf(panel);
  auto cfg = basic_config({make_strategy(Family::mvp, Regime::long_short)}, 520);
  const auto hist = run_backtest(panel, rf, cfg);
  cfg.mode = BacktestMode::dynamic;
  cfg.scenario_count = 4000;
  cfg.ag_starts = 4;
  cfg.threads = 3;
  const auto dyn = run_backtest(panel, rf, cfg);
  REQUIRE(hist.results[0].weights.size() == dyn.results[0].weights.size());
  double total_gap = 0.0;
  int count = 0;
  for (std::size_t d = 0; d < hist.results[0].weights.size(); ++d) {
    total_gap += (hist.results[0].weights[d] - dyn.results[0].weights[d]).cwiseAbs().mean();
    ++count;
  }
  CHECK(total_gap / count < 0.1);
  CHECK_FALSE(dyn.ag_audit.empty());
}

TEST_CASE("compare_to_benchmark aligns and ranks") {
  const auto panel = make_panel(400, 3, 9);
  const auto rf = flat_rf(panel);
  const auto out = run_backtest(
      panel, rf,
      basic_config({make_strategy(Family::ewp, Regime::long_only),
                    make_strategy(Family::mvp, Regime::long_only)},
                   120));
  const auto& ewp = out.results[0];
  std::vector<double> rf_oos(ewp.dates.size(), 0.00005);
  const auto rows = compare_to_benchmark(out.results, ewp, rf_oos);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "EWP");
  CHECK(std::abs(rows[0].report.jensens_alpha) < 1e-12);
  CHECK(rows[0].terminal_price == doctest::Approx(ewp.prices.back()));

  // A strategy with strictly higher daily returns ends at a higher price.
  auto boosted = ewp;
  boosted.label = "BOOST";
  for (std::size_t t = 0; t < boosted.returns.size(); ++t) {
    boosted.returns[t] += 0.0005;
  }
  double v = 100.0;
  for (std::size_t t = 0; t < boosted.returns.size(); ++t) {
    v *= 1.0 + boosted.returns[t];
    boosted.prices[t] = v;
  }
  const auto rows2 = compare_to_benchmark({ewp, boosted}, ewp, rf_oos);
  CHECK(rows2[1].terminal_price > rows2[0].terminal_price);

  auto misaligned = ewp;
  misaligned.dates.back() += 1;
  CHECK_THROWS_AS((void)compare_to_benchmark({misaligned}, ewp, rf_oos), Error);
}

TEST_CASE("backtest validates its inputs") {
  const auto panel = make_panel(100, 2, 10);
  auto cfg = basic_config({make_strategy(Family::ewp, Regime::long_only)}, 120);
  CHECK_THROWS_AS((void)run_backtest(panel, flat_rf(panel), cfg), Error);  // too short
  cfg.strategies.clear();
  CHECK_THROWS_AS((void)run_backtest(panel, flat_rf(panel), cfg), Error);
}
