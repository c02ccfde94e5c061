#include "core/cvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/simplex.hpp"

namespace pfopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_problem(const CvarProblem& p) {
  require(p.scenarios.rows() >= 50, Errc::too_few_observations,
          "CVaR needs >= 50 scenarios for quantile estimation");
  require(p.scenarios.cols() >= 1, Errc::zero_assets, "no assets");
  require(p.confidence > 0.0 && p.confidence < 1.0, Errc::invalid_argument,
          "confidence outside (0,1)");
  require(p.scenarios.allFinite(), Errc::invalid_argument, "non-finite scenario values");
  require(p.box_bound > 0.0, Errc::invalid_argument, "box bound must be positive");
}

std::vector<std::string> names_for(const CvarProblem& p, const std::vector<std::string>& tickers) {
  if (!tickers.empty()) {
    require(static_cast<Eigen::Index>(tickers.size()) == p.scenarios.cols(),
            Errc::dimension_mismatch, "ticker list length != asset count");
    return tickers;
  }
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < p.scenarios.cols(); ++i) out.push_back("A" + std::to_string(i + 1));
  return out;
}

// Builds and solves the dual of
//   min  zeta_cost * zeta + u_cost * sum(u) + d'w
//   s.t. u_s >= -r_s'w - zeta, u >= 0, e'w = 1, regime bounds on w.
// The dual has N+1 rows: row 0 is sum(p) = zeta_cost, row i couples asset i.
// The original (w, zeta) come back as the negated row duals.
struct CvarLpOutcome {
  Eigen::VectorXd w;
  double zeta_loss = 0.0;   // loss-space VaR candidate
  double objective = 0.0;   // primal objective value (loss space)
  int iterations = 0;
};

CvarLpOutcome solve_cvar_lp(const CvarProblem& p, double zeta_cost, double u_cost,
                            const Eigen::VectorXd& d) {
  const Eigen::Index s_count = p.scenarios.rows();
  const Eigen::Index n = p.scenarios.cols();
  const bool long_short = p.regime == Regime::long_short;
  const Eigen::Index extra = long_short ? 2 * n : n;
  const Eigen::Index cols = s_count + 1 + extra;
  const Eigen::Index rows = n + 1;

  Lp lp;
  lp.A.setZero(rows, cols);
  lp.b.resize(rows);
  lp.c.setZero(cols);
  lp.lo.resize(cols);
  lp.up.resize(cols);

  // Scenario columns p_s = (1, r_s), bounded [0, u_cost].
  lp.A.block(0, 0, 1, s_count).setOnes();
  lp.A.block(1, 0, n, s_count) = p.scenarios.transpose();
  lp.lo.head(s_count).setZero();
  lp.up.head(s_count).setConstant(u_cost);

  // theta column: free, appears in every asset row, cost -1 (maximize).
  const Eigen::Index theta = s_count;
  lp.A.block(1, theta, n, 1).setOnes();
  lp.c[theta] = -1.0;
  lp.lo[theta] = -kInf;
  lp.up[theta] = kInf;

  if (long_short) {
    // mu_i (upper box bound) and nu_i (lower box bound) multipliers.
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index mu = theta + 1 + i;
      const Eigen::Index nu = theta + 1 + n + i;
      lp.A(1 + i, mu) = -1.0;
      lp.A(1 + i, nu) = 1.0;
      lp.c[mu] = p.box_bound;
      lp.c[nu] = p.box_bound;
      lp.lo[mu] = lp.lo[nu] = 0.0;
      lp.up[mu] = lp.up[nu] = kInf;
    }
  } else {
    // Slack of the long-only stationarity inequality.
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index t = theta + 1 + i;
      lp.A(1 + i, t) = 1.0;
      lp.lo[t] = 0.0;
      lp.up[t] = kInf;
    }
  }

  lp.b[0] = zeta_cost;
  lp.b.tail(n) = d;

  const LpResult res = solve_lp(lp);
  switch (res.status) {
    case LpStatus::optimal:
      break;
    case LpStatus::infeasible:
      raise(Errc::infeasible, "CVaR LP infeasible");
    case LpStatus::unbounded:
      raise(Errc::unbounded, "CVaR LP unbounded (missing weight bounds)");
    default:
      raise(Errc::solver_failure, "CVaR LP hit the simplex iteration limit");
  }

  CvarLpOutcome out;
  out.w = -res.y.tail(n);
  out.zeta_loss = -res.y[0];
  out.objective = -res.objective;
  out.iterations = res.iterations;

  // Tidy tiny bound violations from finite-precision duals.
  require(std::abs(out.w.sum() - 1.0) <= 1e-6, Errc::solver_failure,
          "recovered CVaR weights do not sum to one");
  if (long_short) {
    out.w = out.w.cwiseMax(-p.box_bound).cwiseMin(p.box_bound);
  } else {
    out.w = out.w.cwiseMax(0.0);
  }
  out.w /= out.w.sum();
  return out;
}

// Maximum of e'diag(r_mean) over the feasible weight set (vertex solution);
// used to test the tangency precondition and to seed Dinkelbach.
Eigen::VectorXd max_mean_vertex(const CvarProblem& p, const Eigen::VectorXd& means) {
  const Eigen::Index n = means.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (p.regime == Regime::long_only || n == 1) {
    Eigen::Index best = 0;
    means.maxCoeff(&best);
    w[best] = 1.0;
    return w;
  }
  // Continuous knapsack: budget 1, each weight in [-b, b], maximize means'w.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return means[a] > means[b]; });
  double budget = 1.0 + p.box_bound * static_cast<double>(n);  // after shifting by +b
  for (Eigen::Index idx : order) {
    const double take = std::min(budget, 2.0 * p.box_bound);
    w[idx] = take - p.box_bound;
    budget -= take;
    if (budget <= 0.0) break;
  }
  return w;
}

}  // namespace

double ru_cvar_loss(const Eigen::VectorXd& returns, double confidence) {
  const Eigen::Index s = returns.size();
  require(s >= 2, Errc::too_few_observations, "CVaR of a near-empty series");
  std::vector<double> losses(static_cast<std::size_t>(s));
  for (Eigen::Index i = 0; i < s; ++i) losses[static_cast<std::size_t>(i)] = -returns[i];
  std::sort(losses.begin(), losses.end(), std::greater<>());
  const double q = 1.0 / ((1.0 - confidence) * static_cast<double>(s));
  const auto value_at = [&](double zeta) {
    double acc = 0.0;
    for (double l : losses) {
      if (l <= zeta) break;  // sorted descending
      acc += l - zeta;
    }
    return zeta + q * acc;
  };
  // The optimum is attained at an order statistic near rank (1-c)S.
  const auto k = static_cast<Eigen::Index>(std::floor((1.0 - confidence) * static_cast<double>(s)));
  double best = kInf;
  for (Eigen::Index i = std::max<Eigen::Index>(0, k - 2); i <= std::min(s - 1, k + 2); ++i) {
    best = std::min(best, value_at(losses[static_cast<std::size_t>(i)]));
  }
  return best;
}

CvarSolution min_cvar_portfolio(const CvarProblem& p, const std::vector<std::string>& tickers) {
  validate_problem(p);
  const double q = 1.0 / ((1.0 - p.confidence) * static_cast<double>(p.scenarios.rows()));
  const auto lp = solve_cvar_lp(p, 1.0, q, Eigen::VectorXd::Zero(p.scenarios.cols()));

  CvarSolution sol;
  sol.weights.tickers = names_for(p, tickers);
  sol.weights.weights = lp.w;
  sol.weights.regime = p.regime;
  sol.cvar = -lp.objective;    // losses are positive in the LP, negative as returns
  sol.var = -lp.zeta_loss;
  sol.lp_iterations = lp.iterations;
  return sol;
}

StarrSolution max_starr_portfolio(const CvarProblem& p, const std::vector<std::string>& tickers) {
  validate_problem(p);
  const Eigen::Index s_count = p.scenarios.rows();
  const Eigen::VectorXd means = p.scenarios.colwise().mean();
  const double q = 1.0 / ((1.0 - p.confidence) * static_cast<double>(s_count));

  Eigen::VectorXd w = max_mean_vertex(p, means);
  double excess = means.dot(w) - p.rf_daily;
  require(excess > 0.0, Errc::no_tangency,
          "no feasible portfolio has positive mean excess return");

  StarrSolution sol;
  sol.weights.tickers = names_for(p, tickers);
  sol.weights.regime = p.regime;

  double tail = ru_cvar_loss(p.scenarios * w, p.confidence);
  if (tail <= 1e-12) {
    // The best-mean vertex carries no tail loss: the ratio is unbounded.
    sol.weights.weights = w;
    sol.unbounded_ratio = true;
    sol.mean_excess = excess;
    sol.cvar = -tail;
    sol.starr = kInf;
    return sol;
  }

  double lambda = excess / tail;
  for (int it = 1; it <= 60; ++it) {
    sol.iterations = it;
    const auto lp = solve_cvar_lp(p, lambda, lambda * q, (-means).eval());
    const Eigen::VectorXd w_next = lp.w;
    const double e_next = means.dot(w_next) - p.rf_daily;
    const double tail_next = ru_cvar_loss(p.scenarios * w_next, p.confidence);
    if (tail_next <= 1e-12) {
      sol.weights.weights = w_next;
      sol.unbounded_ratio = true;
      sol.mean_excess = e_next;
      sol.cvar = -tail_next;
      sol.starr = kInf;
      return sol;
    }
    const double lambda_next = e_next / tail_next;
    if (lambda_next >= lambda) {
      w = w_next;
      excess = e_next;
      tail = tail_next;
    }
    if (std::abs(lambda_next - lambda) <= 1e-9 * std::max(1.0, std::abs(lambda))) {
      lambda = std::max(lambda, lambda_next);
      break;
    }
    lambda = std::max(lambda, lambda_next);
  }

  sol.weights.weights = w;
  sol.mean_excess = excess;
  sol.cvar = -tail;
  sol.starr = excess / tail;
  return sol;
}

}  // namespace pfopt
