#include <doctest.h>

#include <random>

#include "core/cvar.hpp"
#include "core/errors.hpp"
#include "core/risk_metrics.hpp"
#include "support/oracles.hpp"

using namespace pfopt;

namespace {

Eigen::MatrixXd random_scenarios(std::mt19937_64& rng, Eigen::Index s, Eigen::Index n,
                                 double mean_lo = -0.0005, double mean_hi = 0.002) {
  std::uniform_real_distribution<double> mu(mean_lo, mean_hi);
  std::student_t_distribution<double> tdist(5.0);
  Eigen::MatrixXd out(s, n);
  Eigen::VectorXd means(n);
  for (Eigen::Index j = 0; j < n; ++j) means[j] = mu(rng);
  for (Eigen::Index i = 0; i < s; ++i) {
    const double common = 0.004 * tdist(rng);
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = means[j] + 0.006 * tdist(rng) + common;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("RU CVaR equals a direct tail mean for integer tail counts") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> normal(0.0, 0.01);
  Eigen::VectorXd r(200);
  for (int i = 0; i < 200; ++i) r[i] = normal(rng);
  for (double conf : {0.95, 0.99}) {
    CHECK(ru_cvar_loss(r, conf) ==
          doctest::Approx(-oracle::tail_mean_returns(r, conf)).epsilon(1e-12));
  }
}

TEST_CASE("min-CVaR with one asset returns the only feasible portfolio") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 0.01);
  Eigen::MatrixXd s(100, 1);
  for (int i = 0; i < 100; ++i) s(i, 0) = normal(rng);
  for (double conf : {0.9, 0.95, 0.99}) {
    const auto sol = min_cvar_portfolio({s, conf, 0.0, Regime::long_only, 1.0});
    CHECK(sol.weights.weights[0] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("min-CVaR picks the dominating asset") {
  // Asset 2's losses dominate asset 1's in every scenario.
  std::mt19937_64 rng(43);
  std::normal_distribution<double> normal(0.0, 0.01);
  Eigen::MatrixXd s(120, 2);
  for (int i = 0; i < 120; ++i) {
    const double base = normal(rng);
    s(i, 0) = base;
    s(i, 1) = base - 0.005 - std::abs(normal(rng));  // always worse
  }
  const auto sol = min_cvar_portfolio({s, 0.95, 0.0, Regime::long_only, 1.0});
  CHECK(sol.weights.weights[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.weights.weights[1] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("min-CVaR LP objective is optimal against the refined grid oracle") {
  std::mt19937_64 rng(44);
  for (int rep = 0; rep < 3; ++rep) {
    const Eigen::MatrixXd s = random_scenarios(rng, 200, 3);
    const CvarProblem p{s, 0.95, 0.0, Regime::long_only, 1.0};
    const auto sol = min_cvar_portfolio(p);
    const double lp_loss = -sol.cvar;

    const auto grid = oracle::simplex_grid_min_cvar(s, 0.95, 0.02);
    CHECK(lp_loss <= grid.cvar_loss + 1e-6);  // brute force never beats the LP
    const auto fine = oracle::refine_min_cvar(s, 0.95, grid.w, 0.03, 0.002);
    const auto finer = oracle::refine_min_cvar(s, 0.95, fine.w, 0.003, 0.0002);
    CHECK(lp_loss <= finer.cvar_loss + 1e-9);
    CHECK(finer.cvar_loss <= lp_loss + 1e-4);  // and lands in the same basin
  }
}

TEST_CASE("min-CVaR reported value matches the empirical CVaR of its weights") {
  std::mt19937_64 rng(45);
  for (const Regime regime : {Regime::long_only, Regime::long_short}) {
    const Eigen::MatrixXd s = random_scenarios(rng, 400, 4);
    for (double conf : {0.95, 0.99}) {
      const auto sol = min_cvar_portfolio({s, conf, 0.0, regime, 1.0});
      const Eigen::VectorXd port = s * sol.weights.weights;
      const std::vector<double> series(port.data(), port.data() + port.size());
      CHECK(sol.cvar == doctest::Approx(cvar(series, conf)).epsilon(1e-8));
      CHECK(sol.cvar <= var(series, conf) + 1e-12);
    }
  }
}

TEST_CASE("deeper tails are no better at the 95%-optimal weights") {
  std::mt19937_64 rng(46);
  const Eigen::MatrixXd s = random_scenarios(rng, 300, 3);
  const auto sol = min_cvar_portfolio({s, 0.95, 0.0, Regime::long_only, 1.0});
  const Eigen::VectorXd port = s * sol.weights.weights;
  CHECK(ru_cvar_loss(port, 0.99) >= ru_cvar_loss(port, 0.95) - 1e-12);
}

TEST_CASE("exchangeable scenarios give near-equal min-CVaR weights") {
  std::mt19937_64 rng(47);
  std::student_t_distribution<double> tdist(6.0);
  Eigen::MatrixXd s(5000, 4);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) s(i, j) = 0.01 * tdist(rng);
  }
  const auto sol = min_cvar_portfolio({s, 0.95, 0.0, Regime::long_only, 1.0});
  for (int j = 0; j < 4; ++j) CHECK(std::abs(sol.weights.weights[j] - 0.25) < 0.05);
}

TEST_CASE("long-short CVaR obeys the optimizer box") {
  std::mt19937_64 rng(48);
  const Eigen::MatrixXd s = random_scenarios(rng, 300, 4);
  const auto sol = min_cvar_portfolio({s, 0.95, 0.0, Regime::long_short, 1.0});
  CHECK((sol.weights.weights.array().abs() <= 1.0 + 1e-9).all());
  CHECK(sol.weights.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));

  // The long-short optimum is no worse than the long-only one.
  const auto lo = min_cvar_portfolio({s, 0.95, 0.0, Regime::long_only, 1.0});
  CHECK(-sol.cvar <= -lo.cvar + 1e-9);
}

TEST_CASE("max-STARR: single asset and constructed dominance") {
  std::mt19937_64 rng(49);
  std::normal_distribution<double> normal(0.001, 0.01);
  Eigen::MatrixXd s(100, 1);
  for (int i = 0; i < 100; ++i) s(i, 0) = normal(rng);
  const auto single = max_starr_portfolio({s, 0.95, 0.0, Regime::long_only, 1.0});
  CHECK(single.weights.weights[0] == doctest::Approx(1.0).epsilon(1e-9));

  // Asset 1 has a higher mean and uniformly smaller losses than asset 2 and
  // than any mixture: every scenario of asset 1 beats asset 2.
  Eigen::MatrixXd d(150, 2);
  for (int i = 0; i < 150; ++i) {
    const double base = normal(rng);
    d(i, 0) = base + 0.004;
    d(i, 1) = base - 0.01 - std::abs(normal(rng));
  }
  const auto dom = max_starr_portfolio({d, 0.95, 0.0, Regime::long_only, 1.0});
  CHECK(dom.weights.weights[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("max-STARR dominates random feasible portfolios") {
  std::mt19937_64 rng(50);
  for (const Regime regime : {Regime::long_only, Regime::long_short}) {
    const Eigen::MatrixXd s = random_scenarios(rng, 200, 3, 0.0002, 0.002);
    const CvarProblem p{s, 0.95, 0.0, regime, 1.0};
    const auto sol = max_starr_portfolio(p);
    REQUIRE_FALSE(sol.unbounded_ratio);
    const Eigen::VectorXd means = s.colwise().mean();
    for (int k = 0; k < 10000; ++k) {
      const Eigen::VectorXd w = regime == Regime::long_only
                                    ? oracle::random_long_only(rng, 3)
                                    : oracle::random_long_short(rng, 3, 1.0);
      const double tail = ru_cvar_loss(s * w, 0.95);
      if (tail <= 1e-12) continue;
      const double ratio = (means.dot(w) - p.rf_daily) / tail;
      CHECK(sol.starr >= ratio - 1e-7);
    }
  }
}

TEST_CASE("max-STARR requires a positive-excess portfolio") {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> normal(-0.002, 0.01);
  Eigen::MatrixXd s(200, 3);
  for (Eigen::Index i = 0; i < 200; ++i) {
    for (int j = 0; j < 3; ++j) s(i, j) = normal(rng);
  }
  CHECK_THROWS_AS((void)max_starr_portfolio({s, 0.95, 0.001, Regime::long_only, 1.0}), Error);
}

TEST_CASE("CVaR problem validation") {
  Eigen::MatrixXd tiny = Eigen::MatrixXd::Zero(10, 2);
  CHECK_THROWS_AS((void)min_cvar_portfolio({tiny, 0.95, 0.0, Regime::long_only, 1.0}), Error);
  Eigen::MatrixXd ok = Eigen::MatrixXd::Random(100, 2) * 0.01;
  CHECK_THROWS_AS((void)min_cvar_portfolio({ok, 1.5, 0.0, Regime::long_only, 1.0}), Error);
}
