#include "core/backtest.hpp"

#include <cmath>

#include "core/cvar.hpp"
#include "core/errors.hpp"
#include "core/mean_variance.hpp"
#include "core/parallel.hpp"
#include "core/scenario.hpp"

namespace pfopt {

namespace {

Eigen::VectorXd strategy_weights(const StrategySpec& spec, const Eigen::MatrixXd& scenarios,
                                 const MomentEstimates& moments, double rf_prev,
                                 const BacktestConfig& config,
                                 const std::vector<std::string>& tickers) {
  switch (spec.family) {
    case Family::ewp:
      return Eigen::VectorXd::Constant(scenarios.cols(),
                                       1.0 / static_cast<double>(scenarios.cols()));
    case Family::mvp:
      return min_variance_portfolio(moments, spec.regime, tickers).weights.weights;
    case Family::tvp:
      return tangency_portfolio(moments, rf_prev, spec.regime, tickers).weights.weights;
    case Family::cvar_min: {
      CvarProblem p{scenarios, spec.confidence, rf_prev, spec.regime, config.box_bound};
      return min_cvar_portfolio(p, tickers).weights.weights;
    }
    case Family::cvar_tangent: {
      CvarProblem p{scenarios, spec.confidence, rf_prev, spec.regime, config.box_bound};
      return max_starr_portfolio(p, tickers).weights.weights;
    }
  }
  raise(Errc::invalid_argument, "unknown strategy family");
}

}  // namespace

BacktestOutput run_backtest(const ReturnPanel& input_panel, const RiskFreeSeries& aligned_rf,
                            const BacktestConfig& config) {
  require(!config.strategies.empty(), Errc::invalid_argument, "no strategies configured");
  require(config.window_length >= 100, Errc::invalid_argument, "window must be >= 100 days");

  const ReturnPanel panel = to_simple(input_panel);
  const auto t_total = panel.returns.rows();
  const auto n = panel.returns.cols();
  const int window = config.window_length;
  require(t_total > window + 1, Errc::window_too_short,
          "panel has " + std::to_string(t_total) + " rows; needs more than window + 1 = " +
              std::to_string(window + 1));
  require(static_cast<Eigen::Index>(aligned_rf.daily_rate.size()) == t_total,
          Errc::date_axis_mismatch, "risk-free series not aligned to panel");

  const auto out_days = static_cast<std::size_t>(t_total - window);

  BacktestOutput output;
  output.results.resize(config.strategies.size());
  for (std::size_t k = 0; k < config.strategies.size(); ++k) {
    auto& res = output.results[k];
    res.strategy = config.strategies[k];
    res.label = strategy_label(res.strategy);
    res.dates.reserve(out_days);
    res.weights.reserve(out_days);
    res.returns.reserve(out_days);
    res.prices.reserve(out_days);
  }

  // Fallback weights when a day's solve fails: previous day's (equal weights
  // before the first success).
  std::vector<Eigen::VectorXd> last_weights(
      config.strategies.size(), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));

  const bool dynamic_mode = config.mode == BacktestMode::dynamic;
  std::vector<AgFitState> ag_states(static_cast<std::size_t>(n));
  std::vector<bool> ag_warm(static_cast<std::size_t>(n), false);
  TCopula copula;
  int days_since_copula_fit = 0;
  bool copula_ready = false;

  for (Eigen::Index t = window; t < t_total; ++t) {
    const Eigen::MatrixXd window_rows = panel.returns.middleRows(t - window, window);
    const double rf_prev = aligned_rf.daily_rate[static_cast<std::size_t>(t - 1)];
    const Date date = panel.dates[static_cast<std::size_t>(t)];

    Eigen::MatrixXd scenarios;
    MomentEstimates moments;
    bool day_inputs_ok = true;
    std::string day_error;
    try {
      if (dynamic_mode) {
        parallel_for(static_cast<std::size_t>(n), config.threads, [&](std::size_t j) {
          AgFitOptions opts;
          opts.starts = config.ag_starts;
          opts.warm_starts = config.ag_warm_starts;
          opts.seed = config.seed ^ (0x9E37u + 131u * static_cast<std::uint64_t>(j));
          AgParams warm_params;
          if (ag_warm[j]) {
            warm_params = ag_states[j].params;
            opts.warm = &warm_params;
          }
          std::vector<double> col(static_cast<std::size_t>(window));
          for (Eigen::Index r = 0; r < window; ++r) {
            col[static_cast<std::size_t>(r)] = window_rows(r, static_cast<Eigen::Index>(j));
          }
          ag_states[j] = fit_ag(col, opts);
          ag_warm[j] = true;
        });
        for (Eigen::Index j = 0; j < n; ++j) {
          output.ag_audit.push_back(
              {date, panel.tickers[static_cast<std::size_t>(j)],
               ag_states[static_cast<std::size_t>(j)].params});
        }
        if (!copula_ready || days_since_copula_fit >= config.copula_refit_days) {
          Eigen::MatrixXd uniforms(window, n);
          for (Eigen::Index j = 0; j < n; ++j) {
            const auto u = copula_transform(ag_states[static_cast<std::size_t>(j)]);
            for (Eigen::Index r = 0; r < window; ++r) {
              uniforms(r, j) = u[static_cast<std::size_t>(r)];
            }
          }
          copula = fit_copula(uniforms);
          copula_ready = true;
          days_since_copula_fit = 0;
        }
        ++days_since_copula_fit;
        const ScenarioSet set =
            simulate_scenarios(copula, ag_states, config.scenario_count,
                               config.seed ^ static_cast<std::uint64_t>(t) * 0x9E3779B97F4A7C15ULL,
                               date, config.threads);
        scenarios = set.draws;
      } else {
        scenarios = window_rows;
      }
      moments = estimate_moments(scenarios);
    } catch (const Error& e) {
      day_inputs_ok = false;
      day_error = e.what();
    }

    // Solve every strategy for this day (independent given the scenario set).
    std::vector<Eigen::VectorXd> day_weights(config.strategies.size());
    std::vector<int> day_warn(config.strategies.size(), 0);
    parallel_for(config.strategies.size(), config.threads, [&](std::size_t k) {
      const auto& spec = config.strategies[k];
      if (!day_inputs_ok && spec.family != Family::ewp) {
        day_weights[k] = last_weights[k];
        day_warn[k] = 1;
        return;
      }
      try {
        Eigen::VectorXd w =
            strategy_weights(spec, scenarios, moments, rf_prev, config, panel.tickers);
        WeightVector wv{panel.tickers, w, spec.regime};
        WeightBounds bounds;
        bounds.gross_bound = config.gross_bound;
        validate_weights(wv, bounds);
        day_weights[k] = std::move(w);
      } catch (const Error&) {
        day_weights[k] = last_weights[k];
        day_warn[k] = 1;
      }
    });

    const Eigen::VectorXd day_returns = panel.returns.row(t);
    for (std::size_t k = 0; k < config.strategies.size(); ++k) {
      auto& res = output.results[k];
      const double r = day_weights[k].dot(day_returns);
      res.dates.push_back(date);
      res.weights.push_back(day_weights[k]);
      res.returns.push_back(r);
      const double prev = res.prices.empty() ? config.initial_investment : res.prices.back();
      res.prices.push_back(prev * (1.0 + r));
      res.warnings += day_warn[k];
      output.total_warnings += day_warn[k];
      last_weights[k] = day_weights[k];
    }
  }
  return output;
}

std::vector<ComparisonRow> compare_to_benchmark(const std::vector<BacktestResult>& results,
                                                const BacktestResult& benchmark,
                                                const std::vector<double>& rf_oos) {
  require(rf_oos.size() == benchmark.dates.size(), Errc::date_axis_mismatch,
          "risk-free series not aligned to the benchmark dates");
  std::vector<ComparisonRow> rows;
  rows.reserve(results.size());
  for (const auto& res : results) {
    require(res.dates == benchmark.dates, Errc::date_axis_mismatch,
            res.label + ": date axis differs from the benchmark");
    ComparisonRow row;
    row.label = res.label;
    row.report = build_ratio_report(res.returns, rf_oos, benchmark.returns,
                                    res.prices.empty() ? 100.0 : res.prices.front() /
                                        (1.0 + res.returns.front()));
    row.terminal_price = res.prices.empty() ? 0.0 : res.prices.back();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pfopt
