#include "core/huber.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/stats.hpp"

namespace pfopt {

namespace {

struct WlsFit {
  double a = 0.0;
  double b = 0.0;
};

WlsFit weighted_ls(std::span<const double> y, std::span<const double> x,
                   std::span<const double> w) {
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
    swxx += w[i] * x[i] * x[i];
    swxy += w[i] * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  require(std::abs(det) > 0.0, Errc::degenerate_x, "weighted design matrix is singular");
  WlsFit f;
  f.b = (sw * swxy - swx * swy) / det;
  f.a = (swy - f.b * swx) / sw;
  return f;
}

}  // namespace

RobustFit huber_fit(std::span<const double> y, std::span<const double> x, double tuning) {
  require(y.size() == x.size(), Errc::length_mismatch, "huber_fit series not aligned");
  const std::size_t n = y.size();
  require(n >= 3, Errc::too_few_observations, "huber_fit needs >= 3 observations");
  require(tuning > 0.0, Errc::invalid_argument, "tuning constant must be positive");
  {
    const double vx = stats::variance(x);
    require(vx > 0.0, Errc::degenerate_x, "regressor has zero variance");
  }

  std::vector<double> w(n, 1.0), resid(n);
  WlsFit fit = weighted_ls(y, x, w);  // OLS start
  double scale = 0.0;

  RobustFit out;
  out.n_obs = static_cast<int>(n);
  out.converged = false;

  constexpr int kMaxIter = 200;
  for (int it = 1; it <= kMaxIter; ++it) {
    out.iterations = it;
    for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - fit.a - fit.b * x[i];
    scale = stats::mad_scale(resid);
    if (scale <= 1e-14 * std::max(1.0, std::abs(fit.a) + std::abs(fit.b))) {
      // Residuals have collapsed: the data lie on the fitted line.
      out.converged = true;
      scale = 0.0;
      break;
    }
    const double cutoff = tuning * scale;
    for (std::size_t i = 0; i < n; ++i) {
      const double ar = std::abs(resid[i]);
      w[i] = ar <= cutoff ? 1.0 : cutoff / ar;
    }
    const WlsFit next = weighted_ls(y, x, w);
    const double delta = std::abs(next.a - fit.a) + std::abs(next.b - fit.b);
    fit = next;
    if (delta < 1e-10) {
      out.converged = true;
      break;
    }
  }

  out.alpha = fit.a;
  out.beta = fit.b;
  out.scale = scale;

  if (scale > 0.0) {
    // Sandwich covariance: A^-1 B A^-1 with A = X' psi' X and
    // B = scale^2 X' psi(u)^2 X, small-sample corrected by n/(n-2).
    double a11 = 0, a12 = 0, a22 = 0;
    double b11 = 0, b12 = 0, b22 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - fit.a - fit.b * x[i];
      const double u = e / scale;
      const double psi = std::clamp(u, -tuning, tuning);
      const double dpsi = std::abs(u) <= tuning ? 1.0 : 0.0;
      a11 += dpsi;
      a12 += dpsi * x[i];
      a22 += dpsi * x[i] * x[i];
      const double p2 = psi * psi * scale * scale;
      b11 += p2;
      b12 += p2 * x[i];
      b22 += p2 * x[i] * x[i];
    }
    const double det = a11 * a22 - a12 * a12;
    require(std::abs(det) > 0.0, Errc::degenerate_x, "huber sandwich matrix is singular");
    const double i11 = a22 / det, i12 = -a12 / det, i22 = a11 / det;
    const double corr = static_cast<double>(n) / static_cast<double>(n - 2);
    const double v11 = corr * (i11 * (b11 * i11 + b12 * i12) + i12 * (b12 * i11 + b22 * i12));
    const double v22 = corr * (i12 * (b11 * i12 + b12 * i22) + i22 * (b12 * i12 + b22 * i22));
    out.se_alpha = std::sqrt(std::max(v11, 0.0));
    out.se_beta = std::sqrt(std::max(v22, 0.0));
  }

  constexpr double kZ975 = 1.959963984540054;
  out.ci95_alpha = {out.alpha - kZ975 * out.se_alpha, out.alpha + kZ975 * out.se_alpha};
  out.ci95_beta = {out.beta - kZ975 * out.se_beta, out.beta + kZ975 * out.se_beta};
  return out;
}

std::vector<RobustFit> benchmark_panel_fit(const ReturnPanel& panel,
                                           std::span<const double> benchmark, double tuning) {
  require(static_cast<Eigen::Index>(benchmark.size()) == panel.returns.rows(),
          Errc::length_mismatch, "benchmark not aligned to panel");
  std::vector<RobustFit> fits;
  fits.reserve(panel.tickers.size());
  for (Eigen::Index j = 0; j < panel.returns.cols(); ++j) {
    std::vector<double> col(static_cast<std::size_t>(panel.returns.rows()));
    for (Eigen::Index t = 0; t < panel.returns.rows(); ++t) {
      col[static_cast<std::size_t>(t)] = panel.returns(t, j);
    }
    try {
      RobustFit f = huber_fit(col, benchmark, tuning);
      f.ticker = panel.tickers[static_cast<std::size_t>(j)];
      fits.push_back(std::move(f));
    } catch (const Error& e) {
      raise(e.code(), panel.tickers[static_cast<std::size_t>(j)] + ": " + e.what());
    }
  }
  return fits;
}

}  // namespace pfopt
