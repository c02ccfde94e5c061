#include "core/mean_variance.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/qp.hpp"

namespace pfopt {

namespace {

std::vector<std::string> default_tickers(Eigen::Index n, const std::vector<std::string>& given) {
  if (!given.empty()) {
    require(static_cast<Eigen::Index>(given.size()) == n, Errc::dimension_mismatch,
            "ticker list length != asset count");
    return given;
  }
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back("A" + std::to_string(i + 1));
  return out;
}

WeightVector wrap_weights(Eigen::VectorXd w, Regime regime,
                          const std::vector<std::string>& tickers) {
  WeightVector out;
  out.tickers = tickers;
  out.weights = std::move(w);
  out.regime = regime;
  return out;
}

Eigen::LLT<Eigen::MatrixXd> factorize(const MomentEstimates& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.cov);
  require(llt.info() == Eigen::Success, Errc::singular_covariance,
          "covariance failed to factorize after regularization");
  return llt;
}

double sharpe_of(const Eigen::VectorXd& w, const MomentEstimates& m, double rf) {
  const double excess = w.dot(m.mean) - rf;
  const double var = w.dot(m.cov * w);
  return excess / std::sqrt(var);
}

// Long-only maximum-Sharpe by ratio fixed-point iteration over QP
// subproblems min 1/2 w'Sw - t a'w on the simplex, t <- w'Sw / a'w. Falls
// back to a golden-section search over t if the iteration stalls.
Eigen::VectorXd max_sharpe_long_only(const MomentEstimates& m, double rf) {
  const Eigen::Index n = m.mean.size();
  const Eigen::VectorXd a = m.mean.array() - rf;
  const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(1, n);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(1);

  Eigen::Index best_asset = 0;
  a.maxCoeff(&best_asset);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w[best_asset] = 1.0;
  if (n == 1) return w;

  const auto solve_at = [&](double t) {
    return solve_qp_nonneg(m.cov, (-t * a).eval(), A, b, w).x;
  };

  double sharpe = sharpe_of(w, m, rf);
  double t = w.dot(m.cov * w) / a.dot(w);
  int stalls = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::VectorXd w_next = solve_at(t);
    const double excess = a.dot(w_next);
    if (excess <= 0.0) break;  // fixed point left the positive-excess region
    const double s_next = sharpe_of(w_next, m, rf);
    if (s_next >= sharpe - 1e-15) {
      const bool done = std::abs(s_next - sharpe) <= 1e-10 * std::max(1.0, std::abs(sharpe));
      sharpe = s_next;
      w = w_next;
      if (done) return w;
      t = w.dot(m.cov * w) / a.dot(w);
      stalls = 0;
    } else {
      t = 0.5 * (t + w.dot(m.cov * w) / a.dot(w));
      if (++stalls > 3) break;
    }
  }

  // Golden-section over log t; Sharpe along the QP path is unimodal.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(t) - 5.0, hi = std::log(t) + 5.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  auto eval = [&](double logt) { return sharpe_of(solve_at(std::exp(logt)), m, rf); };
  double f1 = eval(x1), f2 = eval(x2);
  for (int i = 0; i < 80; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = eval(x1);
    }
  }
  const Eigen::VectorXd w_gs = solve_at(std::exp(0.5 * (lo + hi)));
  return sharpe_of(w_gs, m, rf) > sharpe ? w_gs : w;
}

}  // namespace

MomentEstimates estimate_moments(const Eigen::MatrixXd& window) {
  const Eigen::Index t = window.rows();
  const Eigen::Index n = window.cols();
  require(t >= n + 2, Errc::window_too_short,
          "moment window has " + std::to_string(t) + " rows, needs >= " + std::to_string(n + 2));

  MomentEstimates m;
  m.mean = window.colwise().mean();
  const Eigen::MatrixXd centered = window.rowwise() - m.mean.transpose();
  m.cov = centered.transpose() * centered / static_cast<double>(t - 1);
  m.cov = ((m.cov + m.cov.transpose()) / 2.0).eval();

  const double trace = m.cov.trace();
  double lambda = trace > 0.0 ? 1e-10 * trace / static_cast<double>(n) : 1e-20;
  double added = 0.0;
  for (int attempt = 0; attempt < 80; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(m.cov);
    if (llt.info() == Eigen::Success) {
      // Guard against semi-definite factorizations that will still produce
      // garbage solves: require a strictly positive diagonal in L.
      if (llt.matrixLLT().diagonal().minCoeff() > 0.0) {
        m.jitter = added;
        return m;
      }
    }
    m.cov.diagonal().array() += lambda;
    added += lambda;
    lambda *= 10.0;
  }
  raise(Errc::singular_covariance, "covariance could not be regularized to positive definite");
}

FrontierCoefficients frontier_coefficients(const MomentEstimates& m) {
  const auto llt = factorize(m);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.mean.size());
  const Eigen::VectorXd sr = llt.solve(m.mean);
  const Eigen::VectorXd se = llt.solve(ones);
  FrontierCoefficients f;
  f.a = m.mean.dot(sr);
  f.b = ones.dot(se);
  f.c = m.mean.dot(se);
  f.delta = f.a * f.b - f.c * f.c;
  const double scale = std::max({f.a * f.b, f.c * f.c, 1e-300});
  f.degenerate = !(f.b > 0.0) || f.delta <= 1e-12 * scale;
  return f;
}

FrontierPoint solve_unconstrained(const MomentEstimates& m, double target_return,
                                  const std::vector<std::string>& tickers) {
  const auto llt = factorize(m);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.mean.size());
  const Eigen::VectorXd sr = llt.solve(m.mean);
  const Eigen::VectorXd se = llt.solve(ones);
  const FrontierCoefficients f = frontier_coefficients(m);

  const auto names = default_tickers(m.mean.size(), tickers);
  if (f.degenerate) {
    // Means proportional to ones: the frontier collapses to the global
    // minimum-variance point; only its own mean is attainable.
    const double gmv_mean = f.c / f.b;
    const double spread = (m.mean.array() - gmv_mean).abs().maxCoeff();
    require(std::abs(target_return - gmv_mean) <= 1e-8 * std::max(1.0, std::abs(gmv_mean)) + spread,
            Errc::degenerate_frontier, "degenerate frontier: only the GMV return is attainable");
    FrontierPoint p;
    p.target_return = target_return;
    p.weights = wrap_weights(se / f.b, Regime::long_short, names);
    p.mean = p.weights.weights.dot(m.mean);
    p.stdev = std::sqrt(1.0 / f.b);
    return p;
  }

  const double q = (f.b * target_return - f.c) / f.delta;
  const double theta = (f.a - f.c * target_return) / f.delta;
  FrontierPoint p;
  p.target_return = target_return;
  p.weights = wrap_weights(q * sr + theta * se, Regime::long_short, names);
  p.mean = p.weights.weights.dot(m.mean);
  const double var = (f.b * target_return * target_return - 2.0 * f.c * target_return + f.a) / f.delta;
  p.stdev = std::sqrt(std::max(var, 0.0));
  return p;
}

FrontierPoint min_variance_portfolio(const MomentEstimates& m, Regime regime,
                                     const std::vector<std::string>& tickers) {
  const Eigen::Index n = m.mean.size();
  const auto names = default_tickers(n, tickers);
  FrontierPoint p;
  if (regime == Regime::long_short) {
    const auto llt = factorize(m);
    const Eigen::VectorXd se = llt.solve(Eigen::VectorXd::Ones(n));
    const double b = se.sum();
    require(b > 0.0, Errc::singular_covariance, "e'S^-1 e <= 0");
    p.weights = wrap_weights(se / b, Regime::long_short, names);
  } else {
    const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(1, n);
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(1);
    const Eigen::VectorXd start = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    const auto res = solve_qp_nonneg(m.cov, Eigen::VectorXd::Zero(n), A, b, start);
    p.weights = wrap_weights(res.x, Regime::long_only, names);
  }
  p.mean = p.weights.weights.dot(m.mean);
  p.target_return = p.mean;
  p.stdev = std::sqrt(p.weights.weights.dot(m.cov * p.weights.weights));
  return p;
}

FrontierPoint tangency_portfolio(const MomentEstimates& m, double rf_daily, Regime regime,
                                 const std::vector<std::string>& tickers) {
  const Eigen::Index n = m.mean.size();
  require((m.mean.array() > rf_daily).any(), Errc::no_tangency,
          "no asset mean exceeds the risk-free rate");
  const auto names = default_tickers(n, tickers);

  FrontierPoint p;
  if (regime == Regime::long_short) {
    const auto llt = factorize(m);
    const Eigen::VectorXd z = llt.solve((m.mean.array() - rf_daily).matrix());
    const double s = z.sum();
    require(s > 0.0, Errc::no_tangency,
            "risk-free rate at or above the frontier vertex return; no upper-branch tangency");
    p.weights = wrap_weights(z / s, Regime::long_short, names);
  } else {
    p.weights = wrap_weights(max_sharpe_long_only(m, rf_daily), Regime::long_only, names);
  }
  p.mean = p.weights.weights.dot(m.mean);
  p.target_return = p.mean;
  p.stdev = std::sqrt(p.weights.weights.dot(m.cov * p.weights.weights));
  return p;
}

FrontierCurve frontier_curve(const MomentEstimates& m, int n_points, Regime regime,
                             const std::vector<std::string>& tickers) {
  require(n_points >= 2, Errc::invalid_argument, "frontier curve needs >= 2 points");
  const FrontierCoefficients f = frontier_coefficients(m);
  FrontierCurve curve;

  if (f.degenerate) {
    curve.points.push_back(min_variance_portfolio(m, regime, tickers));
    curve.skipped = n_points - 1;
    return curve;
  }

  const double gmv_mean = f.c / f.b;
  const double max_mean = m.mean.maxCoeff();
  const double min_mean = m.mean.minCoeff();
  double hi;
  if (regime == Regime::long_short) {
    double span = max_mean - gmv_mean;
    if (span <= 0.0) span = std::max(max_mean - min_mean, 1e-8);
    hi = gmv_mean + 4.0 * span;
  } else {
    hi = max_mean;
  }

  for (int k = 0; k < n_points; ++k) {
    const double target =
        gmv_mean + (hi - gmv_mean) * static_cast<double>(k) / static_cast<double>(n_points - 1);
    try {
      if (regime == Regime::long_short) {
        curve.points.push_back(solve_unconstrained(m, target, tickers));
      } else {
        const double tol = 1e-12 * std::max(1.0, std::abs(max_mean));
        if (target < min_mean - tol || target > max_mean + tol) {
          ++curve.skipped;
          continue;
        }
        const Eigen::Index n = m.mean.size();
        Eigen::MatrixXd A(2, n);
        A.row(0).setOnes();
        A.row(1) = m.mean.transpose();
        Eigen::VectorXd b(2);
        b << 1.0, target;
        // Feasible start: mix of the extreme-mean vertices hitting the target.
        Eigen::Index i_min = 0, i_max = 0;
        m.mean.minCoeff(&i_min);
        m.mean.maxCoeff(&i_max);
        Eigen::VectorXd start = Eigen::VectorXd::Zero(n);
        if (i_min == i_max) {
          start.setConstant(1.0 / static_cast<double>(n));
        } else {
          const double lam = (target - min_mean) / (max_mean - min_mean);
          start[i_max] = std::clamp(lam, 0.0, 1.0);
          start[i_min] = 1.0 - start[i_max];
        }
        const auto res = solve_qp_nonneg(m.cov, Eigen::VectorXd::Zero(n), A, b, start);
        FrontierPoint p;
        p.target_return = target;
        p.weights.tickers = default_tickers(n, tickers);
        p.weights.weights = res.x;
        p.weights.regime = Regime::long_only;
        p.mean = res.x.dot(m.mean);
        p.stdev = std::sqrt(res.x.dot(m.cov * res.x));
        curve.points.push_back(std::move(p));
      }
    } catch (const Error&) {
      ++curve.skipped;
    }
  }
  return curve;
}

CmlLine capital_market_line(const FrontierPoint& tangency, double rf_daily) {
  require(tangency.stdev > 0.0, Errc::zero_volatility, "tangency portfolio has zero risk");
  return CmlLine{rf_daily, (tangency.mean - rf_daily) / tangency.stdev};
}

}  // namespace pfopt
