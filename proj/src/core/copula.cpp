#include "core/copula.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/stats.hpp"

namespace pfopt {

namespace {

constexpr double kDfLow = 2.1;
constexpr double kDfHigh = 50.0;
constexpr double kUniformClamp = 1e-10;

// Piecewise-linear t-quantile evaluated in normal-quantile space, accurate
// enough for likelihood comparison across df candidates (the simulator uses
// the exact root-finding quantile instead).
class QuantileTable {
 public:
  QuantileTable(double df, double g_lo, double g_hi, int points) : g_lo_(g_lo) {
    step_ = (g_hi - g_lo) / static_cast<double>(points - 1);
    z_.resize(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      const double g = g_lo + step_ * i;
      z_[static_cast<std::size_t>(i)] = stats::t_quantile(stats::norm_cdf(g), df);
    }
  }

  double operator()(double g) const {
    const double pos = (g - g_lo_) / step_;
    const auto i = static_cast<std::size_t>(
        std::clamp(pos, 0.0, static_cast<double>(z_.size() - 2)));
    const double frac = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
    return z_[i] + frac * (z_[i + 1] - z_[i]);
  }

 private:
  double g_lo_;
  double step_;
  std::vector<double> z_;
};

// Log-likelihood of the t-copula density at one df given the normal scores
// of the uniforms (recomputed into t scores through the interpolation table).
double copula_loglik(const Eigen::MatrixXd& g_scores, const Eigen::MatrixXd& correlation,
                     double df) {
  const Eigen::Index t_len = g_scores.rows();
  const Eigen::Index n = g_scores.cols();
  const double g_max = g_scores.cwiseAbs().maxCoeff();
  QuantileTable table(df, -g_max - 0.05, g_max + 0.05, 321);

  Eigen::LLT<Eigen::MatrixXd> llt(correlation);
  require(llt.info() == Eigen::Success, Errc::non_pd_projection,
          "copula correlation is not positive definite");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(llt.matrixLLT()(i, i));

  const double nd = static_cast<double>(n);
  const double joint_const = std::lgamma((df + nd) / 2.0) + (nd - 1.0) * std::lgamma(df / 2.0) -
                             nd * std::lgamma((df + 1.0) / 2.0) - 0.5 * log_det;
  double ll = static_cast<double>(t_len) * joint_const;
  Eigen::VectorXd z(n);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    for (Eigen::Index j = 0; j < n; ++j) z[j] = table(g_scores(t, j));
    const double quad = llt.matrixL().solve(z).squaredNorm();
    double marginals = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) marginals += std::log1p(z[j] * z[j] / df);
    ll += -(df + nd) / 2.0 * std::log1p(quad / df) + (df + 1.0) / 2.0 * marginals;
  }
  return ll;
}

}  // namespace

std::vector<double> copula_transform(const AgFitState& state) {
  require(state.params.nu > 2.0, Errc::invalid_argument, "copula transform needs nu > 2");
  const double c = std::sqrt(state.params.nu / (state.params.nu - 2.0));
  std::vector<double> u(state.std_residuals.size());
  for (std::size_t t = 0; t < u.size(); ++t) {
    u[t] = std::clamp(stats::t_cdf(state.std_residuals[t] * c, state.params.nu), kUniformClamp,
                      1.0 - kUniformClamp);
  }
  return u;
}

Eigen::MatrixXd nearest_correlation(Eigen::MatrixXd m) {
  const Eigen::Index n = m.rows();
  require(m.cols() == n, Errc::dimension_mismatch, "correlation matrix must be square");
  const auto clamp_entries = [&](Eigen::MatrixXd& r) {
    r = ((r + r.transpose()) / 2.0).eval();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) {
          r(i, j) = 1.0;
        } else {
          r(i, j) = std::clamp(r(i, j), -(1.0 - 1e-8), 1.0 - 1e-8);
        }
      }
    }
  };
  clamp_entries(m);
  for (int pass = 0; pass < 25; ++pass) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 1e-9) return m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const double floor_ev = std::max(1e-8 * eig.eigenvalues().maxCoeff(), 1e-10);
    Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(floor_ev);
    m = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
    // Rescale back to unit diagonal.
    Eigen::VectorXd d = m.diagonal().cwiseSqrt().cwiseInverse();
    m = (d.asDiagonal() * m * d.asDiagonal()).eval();
    clamp_entries(m);
  }
  raise(Errc::non_pd_projection, "correlation projection failed to reach positive definite");
}

TCopula fit_copula(const Eigen::MatrixXd& uniforms) {
  const Eigen::Index t_len = uniforms.rows();
  const Eigen::Index n = uniforms.cols();
  require(t_len >= 500, Errc::window_too_short, "copula fit needs >= 500 rows");
  require(n >= 1, Errc::zero_assets, "copula fit with no columns");
  require((uniforms.array() > 0.0).all() && (uniforms.array() < 1.0).all(),
          Errc::invalid_argument, "uniforms must lie strictly inside (0,1)");

  TCopula cop;
  cop.correlation = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double tau = stats::kendall_tau(
          std::span<const double>(uniforms.col(i).data(), static_cast<std::size_t>(t_len)),
          std::span<const double>(uniforms.col(j).data(), static_cast<std::size_t>(t_len)));
      const double rho = std::sin(M_PI * tau / 2.0);
      cop.correlation(i, j) = rho;
      cop.correlation(j, i) = rho;
    }
  }
  cop.correlation = nearest_correlation(cop.correlation);

  if (n == 1) {
    // Dependence-free: any df produces the same (empty) copula density.
    cop.df = 10.0;
    cop.loglik = 0.0;
    return cop;
  }

  Eigen::MatrixXd g_scores(t_len, n);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    for (Eigen::Index j = 0; j < n; ++j) g_scores(t, j) = stats::norm_quantile(uniforms(t, j));
  }

  static constexpr double kGrid[] = {2.1, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0,  7.0,  8.0,
                                     10.0, 12.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0};
  double best_df = kGrid[0];
  double best_ll = -std::numeric_limits<double>::infinity();
  for (double df : kGrid) {
    const double ll = copula_loglik(g_scores, cop.correlation, df);
    if (ll > best_ll) {
      best_ll = ll;
      best_df = df;
    }
  }

  // Golden-section refinement between the grid neighbors of the winner.
  double lo = kDfLow, hi = kDfHigh;
  for (std::size_t i = 0; i < std::size(kGrid); ++i) {
    if (kGrid[i] == best_df) {
      lo = i > 0 ? kGrid[i - 1] : kDfLow;
      hi = i + 1 < std::size(kGrid) ? kGrid[i + 1] : kDfHigh;
      break;
    }
  }
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = copula_loglik(g_scores, cop.correlation, x1);
  double f2 = copula_loglik(g_scores, cop.correlation, x2);
  for (int it = 0; it < 24 && hi - lo > 0.02; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = copula_loglik(g_scores, cop.correlation, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = copula_loglik(g_scores, cop.correlation, x2);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_ll = copula_loglik(g_scores, cop.correlation, refined);
  if (refined_ll > best_ll) {
    best_ll = refined_ll;
    best_df = refined;
  }
  cop.df = best_df;
  cop.loglik = best_ll;
  return cop;
}

}  // namespace pfopt
