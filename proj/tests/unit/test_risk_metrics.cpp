#include <doctest.h>

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/risk_metrics.hpp"

using namespace pfopt;

namespace {
const std::vector<double> kZeros100(100, 0.0);
}

TEST_CASE("sharpe: zero-volatility guard and zero-mean case") {
  std::vector<double> constant(50, 0.01);
  std::vector<double> rf(50, 0.0);
  CHECK_THROWS_AS((void)sharpe(constant, rf), Error);
  std::vector<double> alt;
  for (int i = 0; i < 50; ++i) alt.push_back(i % 2 ? 0.01 : -0.01);
  CHECK(sharpe(alt, rf) == doctest::Approx(0.0));
}

TEST_CASE("max drawdown hand cases") {
  CHECK(max_drawdown(std::vector<double>{1, 2, 3, 4}) == doctest::Approx(0.0));
  CHECK(max_drawdown(std::vector<double>{100, 50, 75}) == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)max_drawdown(std::vector<double>{}), Error);
}

TEST_CASE("calmar: doubling in 252 days with a 0.5 drawdown gives 2.0") {
  // 253 prices spanning exactly one 252-day year, peak 160 -> trough 80.
  std::vector<double> prices;
  for (int i = 0; i <= 252; ++i) {
    if (i < 60) {
      prices.push_back(100.0 + i);  // up to 159
    } else if (i == 60) {
      prices.push_back(160.0);      // the peak
    } else if (i < 120) {
      prices.push_back(160.0 - (160.0 - 80.0) * (i - 60) / 60.0);
    } else if (i < 252) {
      prices.push_back(80.0 + (200.0 - 80.0) * (i - 120) / 132.0);
    } else {
      prices.push_back(200.0);
    }
  }
  prices.front() = 100.0;
  REQUIRE(prices.size() == 253);
  CHECK(max_drawdown(prices) == doctest::Approx(0.5));
  CHECK(calmar(prices) == doctest::Approx(2.0).epsilon(1e-9));

  std::vector<double> flat(300, 100.0);
  CHECK_THROWS_AS((void)calmar(flat), Error);  // zero drawdown
}

TEST_CASE("VaR: interpolation rule pinned on the 5x(-0.05) sample") {
  // 5 losses of -0.05 and 95 gains of 0.01 at 95%: h = 99*0.05 + 1 = 5.95,
  // between the 5th (-0.05) and 6th (0.01) order statistics:
  // -0.05 + 0.95 * 0.06 = 0.007 under the type-7 rule.
  std::vector<double> r(100, 0.01);
  for (int i = 0; i < 5; ++i) r[static_cast<std::size_t>(i)] = -0.05;
  CHECK(var(r, 0.95) == doctest::Approx(0.007).epsilon(1e-12));
  CHECK(cvar(r, 0.95) == doctest::Approx(-0.05).epsilon(1e-12));

  std::vector<double> alt;
  for (int i = 0; i < 100; ++i) alt.push_back(i % 2 ? 0.01 : -0.01);
  CHECK(var(alt, 0.95) == doctest::Approx(-0.01));

  std::vector<double> few(10, 0.01);
  CHECK_THROWS_AS((void)var(few, 0.99), Error);
}

TEST_CASE("CVaR hand counts") {
  std::vector<double> constant(100, -0.01);
  CHECK(cvar(constant, 0.95) == doctest::Approx(-0.01));
  std::vector<double> r(100, 0.01);
  r[0] = -0.10;
  r[1] = -0.02;
  CHECK(cvar(r, 0.98) == doctest::Approx(-0.06).epsilon(1e-12));
}

TEST_CASE("STARR arithmetic") {
  // cvar95 = -0.02 exactly, mean excess = 0.001 -> STARR = 0.05.
  std::vector<double> r(100, 0.2 / 95.0);
  for (int i = 0; i < 5; ++i) r[static_cast<std::size_t>(i)] = -0.02;
  CHECK(cvar(r, 0.95) == doctest::Approx(-0.02).epsilon(1e-12));
  CHECK(starr(r, kZeros100, 0.95) == doctest::Approx(0.05).epsilon(1e-10));

  // Zero mean excess -> zero STARR.
  std::vector<double> sym;
  for (int i = 0; i < 100; ++i) sym.push_back(i % 2 ? 0.02 : -0.02);
  CHECK(starr(sym, kZeros100, 0.95) == doctest::Approx(0.0));
}

TEST_CASE("Rachev ratio: symmetry and an all-positive skewed sample") {
  std::mt19937_64 rng(31);
  std::student_t_distribution<double> tdist(5.0);
  std::vector<double> sym(10000);
  for (auto& v : sym) v = tdist(rng);
  CHECK(std::abs(rachev(sym) - 1.0) < 0.15);

  // 20 positive returns with a fat upper tail: gain tail mean clearly
  // exceeds the smallest returns' magnitude.
  std::vector<double> pos{0.001, 0.001, 0.002, 0.002, 0.003, 0.003, 0.004,
                          0.004, 0.005, 0.005, 0.006, 0.006, 0.007, 0.007,
                          0.008, 0.008, 0.009, 0.009, 0.030, 0.050};
  CHECK(rachev(pos, 0.9, 0.9) > 1.0);
}

TEST_CASE("Sortino: zero-mean case and the no-downside guard") {
  std::vector<double> r{0.01, -0.01};
  std::vector<double> rf(2, 0.0);
  CHECK(sortino(r, rf) == doctest::Approx(0.0));
  // Downside deviation of {0.03, -0.01}: sqrt(1e-4 / 2).
  std::vector<double> r2{0.03, -0.01};
  CHECK(sortino(r2, rf) == doctest::Approx(0.01 / std::sqrt(1e-4 / 2)).epsilon(1e-12));
  std::vector<double> up{0.01, 0.02};
  CHECK_THROWS_AS((void)sortino(up, rf), Error);
}

TEST_CASE("Jensen's alpha basics") {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> normal(0.0005, 0.01);
  std::vector<double> bench(200), rf(200, 0.0001);
  for (auto& v : bench) v = normal(rng);

  CHECK(jensens_alpha(bench, bench, rf) == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> shifted(bench);
  for (auto& v : shifted) v += 0.0001;
  CHECK(jensens_alpha(shifted, bench, rf) == doctest::Approx(0.0001).epsilon(1e-9));

  std::vector<double> flat(200, 0.001);
  CHECK_THROWS_AS((void)jensens_alpha(bench, flat, rf), Error);
}

TEST_CASE("tail ordering holds across random series") {
  std::mt19937_64 rng(33);
  std::student_t_distribution<double> t3(3.0);
  std::normal_distribution<double> normal(0.0002, 0.01);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 120 + static_cast<int>(rng() % 400);
    std::vector<double> r(static_cast<std::size_t>(n));
    for (auto& v : r) v = rep % 2 ? 0.01 * t3(rng) : normal(rng);
    CHECK(cvar(r, 0.95) <= var(r, 0.95) + 1e-15);
    CHECK(cvar(r, 0.99) <= var(r, 0.99) + 1e-15);
    CHECK(cvar(r, 0.99) <= cvar(r, 0.95) + 1e-15);
    const auto prices = compound_prices(r, 100.0);
    const double mdd = max_drawdown(prices);
    CHECK(mdd >= 0.0);
    CHECK(mdd <= 1.0);
  }
}

TEST_CASE("location and scale invariances") {
  std::mt19937_64 rng(34);
  std::normal_distribution<double> normal(0.0004, 0.012);
  std::vector<double> r(300), rf(300);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = normal(rng);
    rf[i] = 0.0001;
  }
  const double shift = 0.003, k = 2.5;

  std::vector<double> r_shift(r), rf_shift(rf);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r_shift[i] += shift;
    rf_shift[i] += shift;
  }
  CHECK(sharpe(r_shift, rf_shift) == doctest::Approx(sharpe(r, rf)).epsilon(1e-10));
  CHECK(sortino(r_shift, rf_shift) == doctest::Approx(sortino(r, rf)).epsilon(1e-10));

  std::vector<double> r_scale(r), rf_scale(rf);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r_scale[i] *= k;
    rf_scale[i] *= k;
  }
  CHECK(sharpe(r_scale, rf_scale) == doctest::Approx(sharpe(r, rf)).epsilon(1e-10));
  CHECK(sortino(r_scale, rf_scale) == doctest::Approx(sortino(r, rf)).epsilon(1e-10));
  CHECK(starr(r_scale, rf_scale, 0.95) == doctest::Approx(starr(r, rf, 0.95)).epsilon(1e-10));
  CHECK(rachev(r_scale) == doctest::Approx(rachev(r)).epsilon(1e-10));

  auto prices = compound_prices(r, 100.0);
  auto scaled_prices = prices;
  for (auto& p : scaled_prices) p *= 7.3;
  CHECK(max_drawdown(scaled_prices) == doctest::Approx(max_drawdown(prices)).epsilon(1e-12));
}

TEST_CASE("ratio report records failed preconditions as NaN") {
  std::vector<double> up(40, 0.01);
  std::vector<double> rf(40, 0.0);
  const auto rep = build_ratio_report(up, rf, up);
  CHECK(std::isnan(rep.sharpe));    // zero volatility
  CHECK(std::isnan(rep.sortino));   // no downside
  CHECK(std::isnan(rep.calmar));    // under a year
  CHECK(rep.max_drawdown == doctest::Approx(0.0));
  CHECK(rep.n_obs == 40);
}
